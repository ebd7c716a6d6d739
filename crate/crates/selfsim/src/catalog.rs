//! Named example algebras with their virtual endomorphisms and self-similar
//! structures.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::lie::{LieAlgebra, LieElement};
use crate::linalg::SparseVec;
use crate::structure::{
    build_psi, build_psi_diagonal, build_psi_twisted, ConditionProfile, SelfSimilarStructure, VirtualEndomorphism,
};
use crate::truncalg::Monomial;

/// Parameters shared by all entries; each entry reads the ones it needs.
/// `p = 0` selects the rationals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogParams {
    pub p: u32,
    pub n: usize,
    /// Degree bound `D` for truncated countable algebras.
    pub degree: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<String>,
}

impl CatalogParams {
    pub fn new(p: u32, n: usize, degree: u32) -> Self {
        CatalogParams { p, n, degree, profile: None }
    }

    pub fn field(&self) -> Result<FieldSpec> {
        match self.p {
            0 => Ok(FieldSpec::Rational),
            p => FieldSpec::prime(p),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    /// What the entry realizes.
    pub anchor: &'static str,
    /// Which of `p`, `n`, `D`, `profile` the entry reads.
    pub params: &'static str,
    pub defaults: CatalogParams,
}

/// The full entry table, in listing order.
pub fn entries() -> Vec<CatalogEntry> {
    let e = |name, anchor, params, defaults| CatalogEntry { name, anchor, params, defaults };
    vec![
        e(
            "lamplighter",
            "lamplighter algebra k[x] ⋊ Q with [q_i, a] = x^i a, θ(x^k) = x^(k-1), θ(q_i) = q_i; transitive, recurrent, contracting",
            "p, n, D",
            CatalogParams::new(3, 1, 6),
        ),
        e(
            "lamplighter_corrupted",
            "lamplighter with the sign of x⊗a0 in ψ(q1) flipped; must fail the homomorphism check",
            "p, n, D",
            CatalogParams::new(3, 1, 6),
        ),
        e(
            "abelian_shift",
            "countable abelian algebra truncated at a_D, θ(a_i) = a_(i-1) on span{a_i : i ≥ 2}; faithful",
            "p, D",
            CatalogParams::new(0, 1, 5),
        ),
        e(
            "abelian_shift_finite",
            "abelian algebra a_1..a_n, θ(a_i) = a_(i-1) on span{a_2..a_n}; not recurrent",
            "p, n",
            CatalogParams::new(3, 3, 0),
        ),
        e(
            "abelian_fixed",
            "abelian k a_2 ⋉ k a_1 with θ(a_2) = a_2; neither faithful nor transitive",
            "p",
            CatalogParams::new(3, 1, 0),
        ),
        e(
            "heisenberg_q",
            "Heisenberg algebra a, b, c = [a,b] with θ(b) = a, θ(c) = a + c on span{b, c}; faithful",
            "p",
            CatalogParams::new(0, 1, 0),
        ),
        e(
            "gl3_nilpotent",
            "strictly upper triangular 3×3 matrices over F_p[x] truncated at x^D, H by x-adic valuation; H is not an ideal",
            "p, D",
            CatalogParams::new(3, 1, 4),
        ),
        e(
            "sl_twisted",
            "sl_(n+1) with E_(i,n+1) ↦ ∂_i and the twisted images of E_(n+1,i); faithful",
            "p, n",
            CatalogParams::new(3, 1, 0),
        ),
        e(
            "sl_diagonal",
            "sl_(n+1) with ψ(a) = 1⊗a + a acting by derivations",
            "p, n",
            CatalogParams::new(3, 1, 0),
        ),
        e(
            "derivation_module",
            "X ⋊ L_0 for a profile's L_0 with θ(f) = ε(f)·1; ψ is Taylor expansion",
            "p, profile",
            CatalogParams {
                p: 5,
                n: 1,
                degree: 0,
                profile: Some("sl_np1:1".into()),
            },
        ),
    ]
}

pub fn entry(name: &str) -> Option<CatalogEntry> {
    entries().into_iter().find(|e| e.name == name)
}

/// A constructed entry: the algebra, and whichever of the virtual
/// endomorphism, profile and structure the entry provides.
#[derive(Clone, Debug)]
pub struct CatalogObject {
    pub entry: String,
    pub params: CatalogParams,
    pub algebra: Arc<LieAlgebra>,
    pub ve: Option<VirtualEndomorphism>,
    pub profile: Option<ConditionProfile>,
    pub psi: Option<SelfSimilarStructure>,
    /// Why `psi` is missing when a virtual endomorphism was given.
    pub issues: Vec<String>,
}

fn vec_of(field: FieldSpec, terms: &[(usize, i64)]) -> SparseVec {
    SparseVec::from_entries(terms.iter().map(|&(i, c)| (i, field.from_i64(c))))
}

fn ensure_axioms(algebra: &LieAlgebra) -> Result<()> {
    let report = algebra.verify_axioms();
    match report.violation {
        None => Ok(()),
        Some(v) => Err(Error::InvalidParameter(format!("{} fails the Lie axioms: {v:?}", algebra.name()))),
    }
}

/// Builds the entry `name` with `params`.
pub fn construct(name: &str, params: &CatalogParams) -> Result<CatalogObject> {
    let field = params.field()?;
    let object = match name {
        "lamplighter" => from_ve(name, params, lamplighter(field, params.n, params.degree)?, ConditionProfile::AbelianB),
        "lamplighter_corrupted" => {
            let mut object =
                from_ve(name, params, lamplighter(field, params.n, params.degree)?, ConditionProfile::AbelianB)?;
            object.psi = Some(corrupt_lamplighter(object.psi.as_ref().expect("lamplighter ψ"))?);
            Ok(object)
        }
        "abelian_shift" => from_ve(name, params, abelian_shift(field, params.degree)?, ConditionProfile::AbelianB),
        "abelian_shift_finite" => {
            from_ve(name, params, abelian_shift_finite(field, params.n)?, ConditionProfile::AbelianB)
        }
        "abelian_fixed" => from_ve(name, params, abelian_fixed(field)?, ConditionProfile::AbelianB),
        "heisenberg_q" => from_ve(name, params, heisenberg_q(field)?, ConditionProfile::AbelianB),
        "gl3_nilpotent" => from_ve(
            name,
            params,
            gl3_nilpotent(field, params.degree)?,
            ConditionProfile::HeisenbergCentral,
        ),
        "sl_twisted" => from_psi(name, params, build_psi_twisted(params.n, field)?),
        "sl_diagonal" => from_psi(name, params, build_psi_diagonal(params.n, field)?),
        "derivation_module" => {
            let profile: ConditionProfile = params.profile.as_deref().unwrap_or("sl_np1:1").parse()?;
            let ve = derivation_module(&profile, field, params.degree)?;
            from_ve(name, params, ve, profile)
        }
        other => Err(Error::InvalidParameter(format!("unknown catalog entry {other}"))),
    }?;
    ensure_axioms(&object.algebra)?;
    Ok(object)
}

fn from_ve(
    name: &str,
    params: &CatalogParams,
    ve: VirtualEndomorphism,
    profile: ConditionProfile,
) -> Result<CatalogObject> {
    let mut issues = Vec::new();
    let psi = match build_psi(&ve, &profile) {
        Ok(psi) => Some(psi.renamed(name)),
        Err(e @ (Error::ConditionsFailed(_) | Error::NotHomomorphism(_))) => {
            issues.push(e.to_string());
            None
        }
        Err(e) => return Err(e),
    };
    Ok(CatalogObject {
        entry: name.into(),
        params: params.clone(),
        algebra: ve.algebra().clone(),
        ve: Some(ve),
        profile: Some(profile),
        psi,
        issues,
    })
}

fn from_psi(name: &str, params: &CatalogParams, psi: SelfSimilarStructure) -> Result<CatalogObject> {
    Ok(CatalogObject {
        entry: name.into(),
        params: params.clone(),
        algebra: psi.algebra().clone(),
        ve: None,
        profile: None,
        psi: Some(psi),
        issues: Vec::new(),
    })
}

/// The order used in characteristic 0 when nilpotence gives no `p`.
fn char0_order(field: FieldSpec, m: u32) -> Option<u32> {
    (field.characteristic() == 0).then_some(m)
}

/// Lamplighter `A ⋊ Q` truncated at degree `D`: basis `q1..qn, a0..aD`,
/// `[q_i, a_k] = a_(k+i)`. `H` is spanned by `a1..aD, q1..qn`, `L_0 = k a0`,
/// `θ(a_k) = a_(k-1)` and `θ(q_i) = q_i`.
pub fn lamplighter(field: FieldSpec, n: usize, degree: u32) -> Result<VirtualEndomorphism> {
    let d = degree as usize;
    if n == 0 || n > d {
        return Err(Error::InvalidParameter(format!("lamplighter needs 1 ≤ n ≤ D (n = {n}, D = {d})")));
    }
    let mut symbols: Vec<String> = (1..=n).map(|i| format!("q{i}")).collect();
    symbols.extend((0..=d).map(|k| format!("a{k}")));
    let degrees: Vec<u32> = (1..=n as u32).chain(0..=degree).collect();
    let a = |k: usize| n + k;
    let mut l = LieAlgebra::new("lamplighter", field, symbols)?.with_grading(degrees, degree)?;
    for i in 1..=n {
        for k in 0..=d {
            if k + i <= d {
                l.set_bracket(i - 1, a(k), vec_of(field, &[(a(k + i), 1)]));
            } else {
                l.set_overflow(i - 1, a(k), format!("a{}", k + i));
            }
        }
    }
    let l = Arc::new(l);
    let mut domain = Vec::new();
    let mut images = Vec::new();
    for k in 1..=d {
        domain.push(l.basis_element(a(k)));
        images.push(l.basis_element(a(k - 1)));
    }
    for i in 0..n {
        domain.push(l.basis_element(i));
        images.push(l.basis_element(i));
    }
    let complement = vec![l.basis_element(a(0))];
    VirtualEndomorphism::new(l, domain, images, complement, vec![0], char0_order(field, 2))
}

/// Replaces `ψ(q1)` by `1⊗q1 + x⊗a0`.
pub fn corrupt_lamplighter(psi: &SelfSimilarStructure) -> Result<SelfSimilarStructure> {
    let w = psi.wreath();
    let l = psi.algebra();
    let x = w.alphabet();
    let q1 = l.element("q1")?;
    let a0 = l.element("a0")?;
    let image = w.tensor(&x.one(), &q1).plus(&w.tensor(&x.var(0), &a0));
    psi.with_image("q1", image)
}

/// Abelian `a1..aD` (a truncation of the countable one) with
/// `θ(a_i) = a_(i-1)` on `span{a_i : i ≥ 2}`.
pub fn abelian_shift(field: FieldSpec, degree: u32) -> Result<VirtualEndomorphism> {
    if degree < 2 {
        return Err(Error::InvalidParameter("abelian_shift needs D ≥ 2".into()));
    }
    let symbols = (1..=degree).map(|i| format!("a{i}")).collect();
    let l = LieAlgebra::new("abelian_shift", field, symbols)?.with_grading((1..=degree).collect(), degree)?;
    shift(Arc::new(l), field)
}

/// Abelian `a1..an` with `θ(a_i) = a_(i-1)` on `span{a2..an}`.
pub fn abelian_shift_finite(field: FieldSpec, n: usize) -> Result<VirtualEndomorphism> {
    if n < 2 {
        return Err(Error::InvalidParameter("abelian_shift_finite needs n ≥ 2".into()));
    }
    let symbols = (1..=n).map(|i| format!("a{i}")).collect();
    shift(Arc::new(LieAlgebra::new("abelian_shift_finite", field, symbols)?), field)
}

fn shift(l: Arc<LieAlgebra>, field: FieldSpec) -> Result<VirtualEndomorphism> {
    let domain = (1..l.dim()).map(|i| l.basis_element(i)).collect();
    let images = (1..l.dim()).map(|i| l.basis_element(i - 1)).collect();
    let complement = vec![l.basis_element(0)];
    VirtualEndomorphism::new(l, domain, images, complement, vec![0], char0_order(field, 2))
}

/// Abelian `a1, a2` with `H = k a2`, `θ(a2) = a2`.
pub fn abelian_fixed(field: FieldSpec) -> Result<VirtualEndomorphism> {
    let l = Arc::new(LieAlgebra::new("abelian_fixed", field, vec!["a1".into(), "a2".into()])?);
    let a2 = l.basis_element(1);
    let complement = vec![l.basis_element(0)];
    VirtualEndomorphism::new(l, vec![a2.clone()], vec![a2], complement, vec![0], char0_order(field, 2))
}

/// Heisenberg `a, b, c` with `[a, b] = c` central, `H = span{b, c}`,
/// `θ(b) = a` and `θ(c) = a + c`.
pub fn heisenberg_q(field: FieldSpec) -> Result<VirtualEndomorphism> {
    let mut l = LieAlgebra::new("heisenberg_q", field, vec!["a".into(), "b".into(), "c".into()])?;
    l.set_bracket(0, 1, vec_of(field, &[(2, 1)]));
    let l = Arc::new(l);
    let (a, b, c) = (l.basis_element(0), l.basis_element(1), l.basis_element(2));
    VirtualEndomorphism::new(
        l,
        vec![b, c.clone()],
        vec![a.clone(), a.plus(&c)],
        vec![a],
        vec![0],
        char0_order(field, 2),
    )
}

fn gl3_symbol(k: u32, entry: &str) -> String {
    match k {
        0 => entry.to_string(),
        1 => format!("x*{entry}"),
        _ => format!("x^{k}*{entry}"),
    }
}

/// Strictly upper triangular `3×3` matrices over `F_p[x]` with entries of
/// degree at most `D`, basis `x^k e12`, then `x^k e13`, then `x^k e23`.
/// `H` is taken literally: entry `(i,j)` in `x^(j-i) F_p[x]`, with
/// `θ` dividing entry `(i,j)` by `x^(j-i)`. `L_0` is spanned by
/// `e12, e13, e23, x e13`.
pub fn gl3_nilpotent(field: FieldSpec, degree: u32) -> Result<VirtualEndomorphism> {
    if field.characteristic() == 0 {
        return Err(Error::HypothesisViolated("gl3_nilpotent is defined over F_p".into()));
    }
    if degree < 2 {
        return Err(Error::InvalidParameter("gl3_nilpotent needs D ≥ 2".into()));
    }
    let entries = ["e12", "e13", "e23"];
    let d = degree as usize + 1;
    let symbols = entries
        .iter()
        .flat_map(|e| (0..=degree).map(move |k| gl3_symbol(k, e)))
        .collect();
    let degrees = (0..3).flat_map(|_| 0..=degree).collect();
    let index = |block: usize, k: usize| block * d + k;
    let mut l = LieAlgebra::new("gl3_nilpotent", field, symbols)?.with_grading(degrees, degree)?;
    for a in 0..d {
        for b in 0..d {
            if a + b < d {
                l.set_bracket(index(0, a), index(2, b), vec_of(field, &[(index(1, a + b), 1)]));
            } else {
                l.set_overflow(index(0, a), index(2, b), gl3_symbol((a + b) as u32, "e13"));
            }
        }
    }
    let l = Arc::new(l);
    let mut domain = Vec::new();
    let mut images = Vec::new();
    for (block, shift) in [(0, 1), (1, 2), (2, 1)] {
        for k in shift..d {
            domain.push(l.basis_element(index(block, k)));
            images.push(l.basis_element(index(block, k - shift)));
        }
    }
    let complement = vec![
        l.basis_element(index(0, 0)),
        l.basis_element(index(1, 0)),
        l.basis_element(index(2, 0)),
        l.basis_element(index(1, 1)),
    ];
    VirtualEndomorphism::new(l, domain, images, complement, vec![0, 1, 3], None)
}

/// `L = X ⋊ L_0` for the profile's `L_0 ⊆ Der X`, with `H = X` and
/// `θ(f) = ε(f)·1`. Basis: monomials `[m]` of `X`, then `L_0`. In
/// characteristic 0 the order is `D + 1` and `X` is the profile's alphabet
/// for that order.
pub fn derivation_module(profile: &ConditionProfile, field: FieldSpec, degree: u32) -> Result<VirtualEndomorphism> {
    let order = match field.characteristic() {
        0 => degree.max(1) + 1,
        p => p,
    };
    let complement_len = match profile {
        ConditionProfile::AbelianB => 1,
        _ => 0,
    };
    let realization = profile.l0_realization(field, complement_len, order)?;
    let x = &realization.alphabet;
    let l0 = &realization.algebra;
    let dx = x.dim();
    let mut symbols: Vec<String> = x.basis().iter().map(|m| format!("[{m}]")).collect();
    symbols.extend(l0.symbols().iter().cloned());
    let mut l = LieAlgebra::new(format!("X ⋊ L0[{profile}]"), field, symbols)?;
    for ((i, j), out) in l0.raw_table() {
        l.set_raw_bracket(dx + i, dx + j, out.map_indices(|k| dx + k));
    }
    for (a, d) in realization.images.iter().enumerate() {
        for (mi, m) in x.basis().iter().enumerate() {
            let image = x.apply_derivation(d, &x.monomial(m.clone()))?;
            l.set_bracket(dx + a, mi, x.to_vec(&image));
        }
    }
    let l = Arc::new(l);
    let unit = x
        .monomial_index(&Monomial::one(x.nvars()))
        .expect("constant monomial");
    let domain: Vec<LieElement> = (0..dx).map(|i| l.basis_element(i)).collect();
    let images = (0..dx)
        .map(|i| if i == unit { l.basis_element(unit) } else { l.zero() })
        .collect();
    let complement = (0..l0.dim()).map(|a| l.basis_element(dx + a)).collect();
    let section = profile.section_indices(l0.dim());
    VirtualEndomorphism::new(l, domain, images, complement, section, char0_order(field, order))
}
