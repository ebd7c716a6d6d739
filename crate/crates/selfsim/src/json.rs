//! JSON forms of algebras, polynomials, virtual endomorphisms, structures
//! and level operators. Coefficients are decimal strings (`"2"`, `"-1/3"`).

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::catalog::{CatalogObject, CatalogParams};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::lie::{LieAlgebra, LieElement};
use crate::linalg::{SparseMatrix, SparseVec};
use crate::structure::{ConditionProfile, SelfSimilarStructure, VirtualEndomorphism};
use crate::truncalg::{Derivation, Monomial, TruncPoly, TruncPolyAlgebra};
use crate::wreath::{WreathElement, WreathProduct};

/// Sparse coefficients keyed by basis index.
pub type CoeffsJson = BTreeMap<usize, String>;

/// `{"exponents": "coeff"}` keyed by comma-joined exponent tuples.
pub type PolyJson = BTreeMap<String, String>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketJson {
    pub i: usize,
    pub j: usize,
    pub out: CoeffsJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverflowJson {
    pub i: usize,
    pub j: usize,
    pub escapes: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraJson {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub name: String,
    pub field: FieldSpec,
    pub basis: Vec<String>,
    pub brackets: Vec<BracketJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_bound: Option<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub overflow: Vec<OverflowJson>,
}

pub fn coeffs_to_json(v: &SparseVec) -> CoeffsJson {
    v.iter().map(|(i, c)| (*i, c.to_string())).collect()
}

pub fn coeffs_from_json(field: FieldSpec, json: &CoeffsJson) -> Result<SparseVec> {
    let mut v = SparseVec::new();
    for (i, c) in json {
        v.add_term(*i, &field.parse(c)?);
    }
    Ok(v)
}

impl AlgebraJson {
    pub fn from_algebra(l: &LieAlgebra) -> Self {
        AlgebraJson {
            name: l.name().to_string(),
            field: l.field(),
            basis: l.symbols().to_vec(),
            brackets: l
                .raw_table()
                .iter()
                .map(|(&(i, j), out)| BracketJson { i, j, out: coeffs_to_json(out) })
                .collect(),
            degrees: l.degrees().map(<[u32]>::to_vec),
            degree_bound: l.degree_bound(),
            overflow: l
                .overflow_pairs()
                .iter()
                .map(|(&(i, j), escapes)| OverflowJson { i, j, escapes: escapes.clone() })
                .collect(),
        }
    }

    /// Brackets are stored as given; antisymmetry is not imposed.
    pub fn to_algebra(&self) -> Result<LieAlgebra> {
        let mut l = LieAlgebra::new(self.name.clone(), self.field, self.basis.clone())?;
        if let (Some(degrees), Some(bound)) = (&self.degrees, self.degree_bound) {
            l = l.with_grading(degrees.clone(), bound)?;
        }
        let dim = self.basis.len();
        let in_range = |i: usize| -> Result<()> {
            if i >= dim {
                return Err(Error::Parse(format!("basis index {i} out of range (dim {dim})")));
            }
            Ok(())
        };
        for b in &self.brackets {
            in_range(b.i)?;
            in_range(b.j)?;
            let out = coeffs_from_json(self.field, &b.out)?;
            if let Some(k) = out.max_index() {
                in_range(k)?;
            }
            l.set_raw_bracket(b.i, b.j, out);
        }
        for o in &self.overflow {
            in_range(o.i)?;
            in_range(o.j)?;
            l.set_overflow(o.i, o.j, o.escapes.clone());
        }
        Ok(l)
    }
}

pub fn poly_to_json(u: &TruncPoly) -> PolyJson {
    u.terms().iter().map(|(m, c)| (m.key(), c.to_string())).collect()
}

pub fn poly_from_json(x: &TruncPolyAlgebra, json: &PolyJson) -> Result<TruncPoly> {
    let mut u = TruncPoly::zero();
    for (key, c) in json {
        let m = Monomial::from_key(key)?;
        if m.0.len() != x.nvars() {
            return Err(Error::Parse(format!("monomial {key} has the wrong number of variables")));
        }
        x.check_region(&m)?;
        u.add_term(m, &x.field().parse(c)?);
    }
    Ok(u)
}

/// A derivation as the list of its `n` images `δ(x_i)`.
pub fn derivation_to_json(d: &Derivation) -> Vec<PolyJson> {
    d.images().iter().map(poly_to_json).collect()
}

pub fn derivation_from_json(x: &TruncPolyAlgebra, json: &[PolyJson]) -> Result<Derivation> {
    if json.len() != x.nvars() {
        return Err(Error::Parse(format!("derivation needs {} images", x.nvars())));
    }
    Ok(Derivation::from_images(
        json.iter().map(|p| poly_from_json(x, p)).collect::<Result<Vec<_>>>()?,
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphabetJson {
    pub nvars: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_bound: Option<u32>,
}

/// `Σ m ⊗ a_m + δ`: tensor part keyed by monomial, then the derivation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WreathJson {
    pub tensor: BTreeMap<String, CoeffsJson>,
    pub derivation: Vec<PolyJson>,
}

pub fn wreath_to_json(u: &WreathElement) -> WreathJson {
    WreathJson {
        tensor: u
            .tensor_part()
            .iter()
            .map(|(m, a)| (m.key(), coeffs_to_json(a.coeffs())))
            .collect(),
        derivation: derivation_to_json(u.project_der()),
    }
}

pub fn wreath_from_json(w: &WreathProduct, json: &WreathJson) -> Result<WreathElement> {
    let x = w.alphabet();
    let mut out = w.from_derivation(derivation_from_json(x, &json.derivation)?);
    for (key, coeffs) in &json.tensor {
        let m = Monomial::from_key(key)?;
        x.check_region(&m)?;
        let a = coeffs_from_json(x.field(), coeffs)?;
        if a.max_index().is_some_and(|k| k >= w.algebra().dim()) {
            return Err(Error::Parse(format!("state at {key} outside the algebra")));
        }
        out.add_tensor_term(m, &LieElement::from_vec(a));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiJson {
    pub name: String,
    #[serde(default)]
    pub provenance: String,
    pub algebra: AlgebraJson,
    pub alphabet: AlphabetJson,
    /// One image per basis element, in basis order.
    pub images: Vec<WreathJson>,
}

impl PsiJson {
    pub fn from_structure(psi: &SelfSimilarStructure) -> Self {
        let x = psi.wreath().alphabet();
        PsiJson {
            name: psi.name().to_string(),
            provenance: psi.provenance().to_string(),
            algebra: AlgebraJson::from_algebra(psi.algebra()),
            alphabet: AlphabetJson {
                nvars: x.nvars(),
                degree_bound: x.degree_bound(),
            },
            images: psi.images().iter().map(wreath_to_json).collect(),
        }
    }

    pub fn to_structure(&self) -> Result<SelfSimilarStructure> {
        let l = Arc::new(self.algebra.to_algebra()?);
        let x = TruncPolyAlgebra::new(l.field(), self.alphabet.nvars, self.alphabet.degree_bound)?;
        let w = WreathProduct::new(x, l);
        let images = self
            .images
            .iter()
            .map(|u| wreath_from_json(&w, u))
            .collect::<Result<Vec<_>>>()?;
        SelfSimilarStructure::new(self.name.clone(), self.provenance.clone(), w, images)
    }
}

/// A virtual endomorphism against a separately given algebra. Elements are
/// written as combinations such as `"a + 2*c"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaJson {
    /// A linearly independent family spanning `H`.
    pub domain: Vec<String>,
    pub images: Vec<String>,
    /// Basis of `L_0`.
    pub complement: Vec<String>,
    /// Positions of `y_1..y_n` in `complement`.
    pub section: Vec<usize>,
    /// Required in characteristic 0, implied in characteristic `p`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
}

impl ThetaJson {
    pub fn from_endomorphism(ve: &VirtualEndomorphism) -> Self {
        let l = ve.algebra();
        let fmt = |v: &[LieElement]| v.iter().map(|e| l.format(e)).collect();
        ThetaJson {
            domain: fmt(ve.domain()),
            images: fmt(ve.images()),
            complement: fmt(ve.complement()),
            section: ve.section_indices().to_vec(),
            order: (ve.field().characteristic() == 0).then_some(ve.order()),
        }
    }

    pub fn to_endomorphism(&self, algebra: Arc<LieAlgebra>) -> Result<VirtualEndomorphism> {
        let parse = |v: &[String]| -> Result<Vec<LieElement>> {
            v.iter().map(|s| algebra.parse_element(s)).collect()
        };
        VirtualEndomorphism::new(
            algebra.clone(),
            parse(&self.domain)?,
            parse(&self.images)?,
            parse(&self.complement)?,
            self.section.clone(),
            self.order,
        )
    }
}

/// A level operator as `{"dim": 9, "entries": [[row, col, "v"], …]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub dim: usize,
    pub entries: Vec<(usize, usize, String)>,
}

impl OperatorJson {
    pub fn from_matrix(m: &SparseMatrix) -> Self {
        let mut entries: Vec<(usize, usize, String)> =
            m.entries().into_iter().map(|(r, c, v)| (r, c, v.to_string())).collect();
        entries.sort_by_key(|&(r, c, _)| (r, c));
        OperatorJson { dim: m.rows(), entries }
    }
}

/// A catalog object with everything needed to rebuild it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogJson {
    pub entry: String,
    pub params: CatalogParams,
    pub algebra: AlgebraJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<ThetaJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<ConditionProfile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<PsiJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub issues: Vec<String>,
}

impl CatalogJson {
    pub fn from_object(o: &CatalogObject) -> Self {
        CatalogJson {
            entry: o.entry.clone(),
            params: o.params.clone(),
            algebra: AlgebraJson::from_algebra(&o.algebra),
            theta: o.ve.as_ref().map(ThetaJson::from_endomorphism),
            profile: o.profile.clone(),
            psi: o.psi.as_ref().map(PsiJson::from_structure),
            issues: o.issues.clone(),
        }
    }

    pub fn to_object(&self) -> Result<CatalogObject> {
        let algebra = Arc::new(self.algebra.to_algebra()?);
        let ve = self
            .theta
            .as_ref()
            .map(|t| t.to_endomorphism(algebra.clone()))
            .transpose()?;
        let psi = self.psi.as_ref().map(PsiJson::to_structure).transpose()?;
        Ok(CatalogObject {
            entry: self.entry.clone(),
            params: self.params.clone(),
            algebra,
            ve,
            profile: self.profile.clone(),
            psi,
            issues: self.issues.clone(),
        })
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn from_str<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}
