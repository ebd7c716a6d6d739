//! Lie algebras given by sparse structure constants.
//!
//! A finite algebra is an ordered list of basis symbols and a bracket table.
//! A countable algebra (such as `k[x] ⋊ Q`) is represented by its basis
//! truncated at a degree bound `D`, together with the set of basis pairs whose
//! bracket escapes the bound. Bracketing such a pair is an error, never a
//! silent zero.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{SparseMatrix, SparseVec, Subspace};

/// A finite sparse combination of basis symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LieElement(SparseVec);

impl LieElement {
    pub fn zero() -> Self {
        LieElement(SparseVec::new())
    }

    pub fn basis(index: usize, field: FieldSpec) -> Self {
        LieElement(SparseVec::unit(index, field))
    }

    pub fn from_vec(v: SparseVec) -> Self {
        LieElement(v)
    }

    pub fn coeffs(&self) -> &SparseVec {
        &self.0
    }

    pub fn into_vec(self) -> SparseVec {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn plus(&self, other: &LieElement) -> LieElement {
        LieElement(self.0.plus(&other.0))
    }

    pub fn minus(&self, other: &LieElement) -> LieElement {
        LieElement(self.0.minus(&other.0))
    }

    pub fn scaled(&self, c: &Scalar) -> LieElement {
        LieElement(self.0.scaled(c))
    }

    pub fn neg(&self) -> LieElement {
        LieElement(self.0.neg())
    }

    pub fn add_scaled(&mut self, c: &Scalar, other: &LieElement) {
        self.0.add_scaled(c, &other.0);
    }
}

/// The first failure found by [`LieAlgebra::verify_axioms`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomViolation {
    Antisymmetry { left: String, right: String },
    Jacobi { a: String, b: String, c: String, residual: String },
    Grading { left: String, right: String, term: String },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::Antisymmetry { left, right } => {
                write!(f, "antisymmetry violated at ({left}, {right})")
            }
            AxiomViolation::Jacobi { a, b, c, residual } => {
                write!(f, "Jacobi violated at ({a}, {b}, {c}): sum is {residual}")
            }
            AxiomViolation::Grading { left, right, term } => {
                write!(f, "[{left}, {right}] has term {term} of the wrong degree")
            }
        }
    }
}

/// Outcome of an exhaustive axiom check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub pairs_checked: usize,
    pub triples_checked: usize,
    /// Triples left out because some bracket escapes the truncation.
    pub triples_skipped: usize,
    pub violation: Option<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// A Lie algebra over an ordered basis of named symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    name: String,
    field: FieldSpec,
    symbols: Vec<String>,
    index: HashMap<String, usize>,
    degrees: Option<Vec<u32>>,
    degree_bound: Option<u32>,
    table: BTreeMap<(usize, usize), SparseVec>,
    overflow: BTreeMap<(usize, usize), String>,
}

impl LieAlgebra {
    /// An abelian algebra on the given symbols; brackets are added afterwards.
    pub fn new(name: impl Into<String>, field: FieldSpec, symbols: Vec<String>) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() || s.contains(char::is_whitespace) {
                return Err(Error::InvalidParameter(format!("bad basis symbol {s:?}")));
            }
            if index.insert(s.clone(), i).is_some() {
                return Err(Error::InvalidParameter(format!("duplicate basis symbol {s}")));
            }
        }
        Ok(LieAlgebra {
            name: name.into(),
            field,
            symbols,
            index,
            degrees: None,
            degree_bound: None,
            table: BTreeMap::new(),
            overflow: BTreeMap::new(),
        })
    }

    /// Declares a degree per basis symbol and the truncation bound.
    pub fn with_grading(mut self, degrees: Vec<u32>, bound: u32) -> Result<Self> {
        if degrees.len() != self.symbols.len() {
            return Err(Error::InvalidParameter("one degree per basis symbol".into()));
        }
        if let Some(d) = degrees.iter().find(|d| **d > bound) {
            return Err(Error::InvalidParameter(format!(
                "basis degree {d} exceeds the bound {bound}"
            )));
        }
        self.degrees = Some(degrees);
        self.degree_bound = Some(bound);
        Ok(self)
    }

    /// Stores `[b_i, b_j] = out` exactly as given (no antisymmetrization).
    pub fn set_raw_bracket(&mut self, i: usize, j: usize, out: SparseVec) {
        if out.is_zero() {
            self.table.remove(&(i, j));
        } else {
            self.table.insert((i, j), out);
        }
    }

    /// Stores `[b_i, b_j] = out` and, implicitly, `[b_j, b_i] = -out`.
    pub fn set_bracket(&mut self, i: usize, j: usize, out: SparseVec) {
        assert_ne!(i, j, "diagonal brackets vanish");
        if i < j {
            self.set_raw_bracket(i, j, out);
        } else {
            self.set_raw_bracket(j, i, out.neg());
        }
    }

    /// Marks `[b_i, b_j]` as escaping the truncation; `escaped` names what
    /// would have been produced.
    pub fn set_overflow(&mut self, i: usize, j: usize, escaped: impl Into<String>) {
        self.overflow.insert((i.min(j), i.max(j)), escaped.into());
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, i: usize) -> &str {
        &self.symbols[i]
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.index.get(symbol).copied()
    }

    pub fn degrees(&self) -> Option<&[u32]> {
        self.degrees.as_deref()
    }

    pub fn degree_bound(&self) -> Option<u32> {
        self.degree_bound
    }

    /// Whether this is a truncation of a countable algebra.
    pub fn is_truncated(&self) -> bool {
        self.degree_bound.is_some()
    }

    pub fn raw_table(&self) -> &BTreeMap<(usize, usize), SparseVec> {
        &self.table
    }

    pub fn overflow_pairs(&self) -> &BTreeMap<(usize, usize), String> {
        &self.overflow
    }

    pub fn element(&self, symbol: &str) -> Result<LieElement> {
        self.index_of(symbol)
            .map(|i| LieElement::basis(i, self.field))
            .ok_or_else(|| Error::Parse(format!("unknown basis symbol {symbol}")))
    }

    pub fn basis_element(&self, i: usize) -> LieElement {
        LieElement::basis(i, self.field)
    }

    pub fn zero(&self) -> LieElement {
        LieElement::zero()
    }

    /// Table lookup without antisymmetry fallback.
    fn lookup(&self, i: usize, j: usize) -> Option<&SparseVec> {
        self.table.get(&(i, j))
    }

    /// `[b_i, b_j]` on basis symbols.
    pub fn basis_bracket(&self, i: usize, j: usize) -> Result<SparseVec> {
        if let Some(escaped) = self.overflow.get(&(i.min(j), i.max(j))) {
            return Err(Error::TruncationExceeded(format!(
                "[{}, {}] = {escaped} leaves degree <= {}",
                self.symbols[i],
                self.symbols[j],
                self.degree_bound.unwrap_or(0)
            )));
        }
        if let Some(v) = self.lookup(i, j) {
            return Ok(v.clone());
        }
        if let Some(v) = self.lookup(j, i) {
            return Ok(v.neg());
        }
        Ok(SparseVec::new())
    }

    pub fn bracket(&self, a: &LieElement, b: &LieElement) -> Result<LieElement> {
        let mut out = SparseVec::new();
        for (i, ci) in a.coeffs() {
            for (j, cj) in b.coeffs() {
                if i == j {
                    continue;
                }
                out.add_scaled(&(ci * cj), &self.basis_bracket(*i, *j)?);
            }
        }
        Ok(LieElement(out))
    }

    /// `b^k ∘ h = [b, [b, … [b, h]]]` with `k` brackets.
    pub fn ad_power(&self, b: &LieElement, k: u32, h: &LieElement) -> Result<LieElement> {
        let mut out = h.clone();
        for _ in 0..k {
            if out.is_zero() {
                break;
            }
            out = self.bracket(b, &out)?;
        }
        Ok(out)
    }

    /// Applies the letters right to left: `[w_1, [w_2, … [w_k, h]]]`.
    pub fn ad_letters(&self, letters: &[&LieElement], h: &LieElement) -> Result<LieElement> {
        let mut out = h.clone();
        for b in letters.iter().rev() {
            if out.is_zero() {
                break;
            }
            out = self.bracket(b, &out)?;
        }
        Ok(out)
    }

    /// `y_1^{i_1} ∘ (y_2^{i_2} ∘ … (y_n^{i_n} ∘ h))`.
    pub fn ad_word(&self, letters: &[LieElement], exponents: &[u32], h: &LieElement) -> Result<LieElement> {
        assert_eq!(letters.len(), exponents.len());
        let mut out = h.clone();
        for (y, k) in letters.iter().zip(exponents).rev() {
            out = self.ad_power(y, *k, &out)?;
        }
        Ok(out)
    }

    /// The matrix of `ad(b)` on the basis.
    pub fn ad_matrix(&self, b: &LieElement) -> Result<SparseMatrix> {
        let columns = (0..self.dim())
            .map(|j| self.bracket(b, &self.basis_element(j)).map(LieElement::into_vec))
            .collect::<Result<Vec<_>>>()?;
        Ok(SparseMatrix::from_columns(self.dim(), columns))
    }

    /// Exhaustive antisymmetry, Jacobi and grading check over the (truncated)
    /// basis. Triples touching the truncation are skipped and counted.
    pub fn verify_axioms(&self) -> AxiomReport {
        let n = self.dim();
        let mut report = AxiomReport {
            pairs_checked: 0,
            triples_checked: 0,
            triples_skipped: 0,
            violation: None,
        };
        for i in 0..n {
            for j in i..n {
                report.pairs_checked += 1;
                let ok = match (self.lookup(i, j), self.lookup(j, i)) {
                    (Some(v), _) if i == j => v.is_zero(),
                    (Some(forward), Some(backward)) => forward.plus(backward).is_zero(),
                    _ => true,
                };
                if !ok {
                    report.violation = Some(AxiomViolation::Antisymmetry {
                        left: self.symbols[i].clone(),
                        right: self.symbols[j].clone(),
                    });
                    return report;
                }
            }
        }
        if let Some(degrees) = &self.degrees {
            for ((i, j), out) in &self.table {
                if let Some(k) = out.indices().find(|k| degrees[*k] != degrees[*i] + degrees[*j]) {
                    report.violation = Some(AxiomViolation::Grading {
                        left: self.symbols[*i].clone(),
                        right: self.symbols[*j].clone(),
                        term: self.symbols[k].clone(),
                    });
                    return report;
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    match self.jacobi_residual(i, j, k) {
                        Ok(r) if r.is_zero() => report.triples_checked += 1,
                        Ok(r) => {
                            report.violation = Some(AxiomViolation::Jacobi {
                                a: self.symbols[i].clone(),
                                b: self.symbols[j].clone(),
                                c: self.symbols[k].clone(),
                                residual: self.format(&r),
                            });
                            return report;
                        }
                        Err(_) => report.triples_skipped += 1,
                    }
                }
            }
        }
        report
    }

    fn jacobi_residual(&self, i: usize, j: usize, k: usize) -> Result<LieElement> {
        let (a, b, c) = (self.basis_element(i), self.basis_element(j), self.basis_element(k));
        let t1 = self.bracket(&a, &self.bracket(&b, &c)?)?;
        let t2 = self.bracket(&b, &self.bracket(&c, &a)?)?;
        let t3 = self.bracket(&c, &self.bracket(&a, &b)?)?;
        Ok(t1.plus(&t2).plus(&t3))
    }

    /// Human-readable form such as `2*e0 - e1`.
    pub fn format(&self, a: &LieElement) -> String {
        format_combination(a.coeffs(), |i| self.symbols[i].clone())
    }

    /// Parses `symbol`, `c*symbol` terms joined by ` + ` or ` - `.
    pub fn parse_element(&self, text: &str) -> Result<LieElement> {
        if text.trim() == "0" && self.index_of("0").is_none() {
            return Ok(LieElement::zero());
        }
        let mut out = SparseVec::new();
        let mut sign = self.field.one();
        let mut expect_term = true;
        for token in text.split_whitespace() {
            match token {
                "+" | "-" if !expect_term => {
                    sign = if token == "+" { self.field.one() } else { -self.field.one() };
                    expect_term = true;
                }
                _ if expect_term => {
                    let token = match token.strip_prefix('-') {
                        Some(rest) if self.index_of(token).is_none() => {
                            sign = -sign;
                            rest
                        }
                        _ => token,
                    };
                    let (coeff, symbol) = match token.split_once('*') {
                        Some((c, s)) if self.index_of(token).is_none() => match self.field.parse(c) {
                            Ok(c) => (c, s),
                            Err(_) => (self.field.one(), token),
                        },
                        _ => (self.field.one(), token),
                    };
                    let i = self
                        .index_of(symbol)
                        .ok_or_else(|| Error::Parse(format!("unknown basis symbol {symbol}")))?;
                    out.add_term(i, &(&sign * &coeff));
                    expect_term = false;
                }
                _ => return Err(Error::Parse(format!("unexpected token {token:?}"))),
            }
        }
        if expect_term {
            return Err(Error::Parse(format!("incomplete element {text:?}")));
        }
        Ok(LieElement(out))
    }

    /// The subspace spanned by the given elements.
    pub fn span<'a>(&self, elements: impl IntoIterator<Item = &'a LieElement>) -> Subspace {
        let mut s = Subspace::zero(self.field, self.dim());
        for e in elements {
            s.insert(e.coeffs());
        }
        s
    }

    /// The subalgebra generated by `generators`: their span, closed under
    /// brackets with everything found so far.
    pub fn generated_subalgebra(&self, generators: &[LieElement]) -> Result<Subspace> {
        let mut closure = self.span(generators);
        let mut found: Vec<LieElement> = closure.basis().iter().cloned().map(LieElement).collect();
        let mut frontier = found.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for a in &frontier {
                for b in &found {
                    let c = self.bracket(a, b)?;
                    if closure.insert(c.coeffs()) {
                        next.push(c);
                    }
                }
            }
            found.extend(next.iter().cloned());
            frontier = next;
        }
        Ok(closure)
    }
}

/// Formats a combination `Σ c_i name(i)` with signs folded into the joins.
pub fn format_combination(v: &SparseVec, mut name: impl FnMut(usize) -> String) -> String {
    if v.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (i, c)) in v.iter().enumerate() {
        let text = c.signed_string();
        let (negative, magnitude) = match text.strip_prefix('-') {
            Some(m) => (true, m.to_string()),
            None => (false, text),
        };
        match (k, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        if magnitude != "1" {
            out.push_str(&magnitude);
            out.push('*');
        }
        out.push_str(&name(*i));
    }
    out
}

/// Problems detected when validating `L = H ⊕ L0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecompositionIssue {
    NotComplementary { detail: String },
    NotIdeal { left: String, right: String, bracket: String },
    NotSubalgebra { left: String, right: String, bracket: String },
}

impl fmt::Display for DecompositionIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecompositionIssue::NotComplementary { detail } => write!(f, "L ≠ H ⊕ L0: {detail}"),
            DecompositionIssue::NotIdeal { left, right, bracket } => {
                write!(f, "H is not an ideal: [{left}, {right}] = {bracket} ∉ H")
            }
            DecompositionIssue::NotSubalgebra { left, right, bracket } => {
                write!(f, "L0 is not a subalgebra: [{left}, {right}] = {bracket} ∉ L0")
            }
        }
    }
}

/// `L = H ⋉ L0`: an ideal `H` and a complementary subalgebra `L0` with an
/// ordered basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemidirectDecomposition {
    pub ideal: Subspace,
    pub complement_basis: Vec<LieElement>,
}

impl SemidirectDecomposition {
    pub fn new(ideal: Subspace, complement_basis: Vec<LieElement>) -> Self {
        SemidirectDecomposition {
            ideal,
            complement_basis,
        }
    }

    pub fn complement(&self, algebra: &LieAlgebra) -> Subspace {
        algebra.span(&self.complement_basis)
    }

    /// Returns the first violated requirement, checking complementarity,
    /// then `[L0, H] ⊆ H` and `[H, H] ⊆ H`, then `[L0, L0] ⊆ L0`. Pairs whose
    /// bracket escapes the truncation are skipped.
    pub fn check(&self, algebra: &LieAlgebra) -> Option<DecompositionIssue> {
        let complement = self.complement(algebra);
        if complement.dim() != self.complement_basis.len() {
            return Some(DecompositionIssue::NotComplementary {
                detail: "the L0 basis is linearly dependent".into(),
            });
        }
        let total = self.ideal.sum(&complement).dim();
        if total != algebra.dim() || self.ideal.dim() + complement.dim() != algebra.dim() {
            return Some(DecompositionIssue::NotComplementary {
                detail: format!(
                    "dim H = {}, dim L0 = {}, dim(H + L0) = {}, dim L = {}",
                    self.ideal.dim(),
                    complement.dim(),
                    total,
                    algebra.dim()
                ),
            });
        }
        let h_basis: Vec<LieElement> =
            self.ideal.basis().iter().cloned().map(LieElement::from_vec).collect();
        let ideal_pairs = self
            .complement_basis
            .iter()
            .flat_map(|l| h_basis.iter().map(move |h| (l, h)))
            .chain(h_basis.iter().enumerate().flat_map(|(k, a)| {
                h_basis[k + 1..].iter().map(move |b| (a, b))
            }));
        for (l, h) in ideal_pairs {
            if let Ok(b) = algebra.bracket(l, h) {
                if !self.ideal.contains(b.coeffs()) {
                    return Some(DecompositionIssue::NotIdeal {
                        left: algebra.format(l),
                        right: algebra.format(h),
                        bracket: algebra.format(&b),
                    });
                }
            }
        }
        for (k, a) in self.complement_basis.iter().enumerate() {
            for b in &self.complement_basis[k + 1..] {
                if let Ok(c) = algebra.bracket(a, b) {
                    if !complement.contains(c.coeffs()) {
                        return Some(DecompositionIssue::NotSubalgebra {
                            left: algebra.format(a),
                            right: algebra.format(b),
                            bracket: algebra.format(&c),
                        });
                    }
                }
            }
        }
        None
    }
}

/// `sl_2` on `e, h, f` with `[e,f] = h`, `[h,e] = 2e`, `[h,f] = -2f`.
pub fn sl2(field: FieldSpec) -> LieAlgebra {
    let mut l = LieAlgebra::new("sl2", field, vec!["e".into(), "h".into(), "f".into()]).unwrap();
    let c = |n: i64| field.from_i64(n);
    l.set_bracket(0, 2, SparseVec::from_entries([(1, c(1))]));
    l.set_bracket(1, 0, SparseVec::from_entries([(0, c(2))]));
    l.set_bracket(1, 2, SparseVec::from_entries([(2, c(-2))]));
    l
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn sl2_passes_axioms() {
        for field in [f(2), f(3), f(5), FieldSpec::rational()] {
            let r = sl2(field).verify_axioms();
            assert!(r.passed(), "{:?}", r.violation);
            assert_eq!(r.triples_checked, 1);
        }
    }

    #[test]
    fn antisymmetry_violation_is_reported() {
        let field = f(5);
        let mut l = LieAlgebra::new("bad", field, vec!["e1".into(), "e2".into(), "e3".into()]).unwrap();
        l.set_raw_bracket(0, 1, SparseVec::unit(2, field));
        l.set_raw_bracket(1, 0, SparseVec::unit(2, field));
        assert_eq!(
            l.verify_axioms().violation,
            Some(AxiomViolation::Antisymmetry {
                left: "e1".into(),
                right: "e2".into()
            })
        );
    }

    #[test]
    fn jacobi_violation_is_reported() {
        let field = f(3);
        let mut l = LieAlgebra::new("bad", field, vec!["a".into(), "b".into(), "c".into()]).unwrap();
        l.set_bracket(0, 1, SparseVec::unit(2, field));
        l.set_bracket(1, 2, SparseVec::unit(0, field));
        l.set_bracket(0, 2, SparseVec::unit(0, field));
        assert!(matches!(l.verify_axioms().violation, Some(AxiomViolation::Jacobi { .. })));
    }

    #[test]
    fn bracket_is_antisymmetric_and_bilinear() {
        let l = sl2(f(5));
        let e = l.element("e").unwrap();
        let fe = l.element("f").unwrap();
        let h = l.element("h").unwrap();
        assert_eq!(l.bracket(&e, &fe).unwrap(), h);
        assert_eq!(l.bracket(&fe, &e).unwrap(), h.neg());
        assert!(l.bracket(&e, &e).unwrap().is_zero());
        let sum = e.plus(&fe);
        assert!(l.bracket(&sum, &sum).unwrap().is_zero());
    }

    #[test]
    fn ad_words() {
        let l = sl2(FieldSpec::rational());
        let (e, h, fe) = (l.element("e").unwrap(), l.element("h").unwrap(), l.element("f").unwrap());
        assert_eq!(l.ad_word(&[], &[], &h).unwrap(), h);
        // [e, [e, f]] = [e, h] = -2e
        assert_eq!(
            l.ad_word(std::slice::from_ref(&e), &[2], &fe).unwrap(),
            e.scaled(&FieldSpec::Rational.from_i64(-2))
        );
        // right-to-left: h first, then e: [e, [h, f]] = [e, -2f] = -2h
        assert_eq!(
            l.ad_word(&[e.clone(), h.clone()], &[1, 1], &fe).unwrap(),
            h.scaled(&FieldSpec::Rational.from_i64(-2))
        );
    }

    #[test]
    fn truncation_is_an_error() {
        let field = f(3);
        let mut l = LieAlgebra::new("t", field, vec!["q".into(), "a".into()])
            .unwrap()
            .with_grading(vec![1, 1], 1)
            .unwrap();
        l.set_overflow(0, 1, "a'");
        let r = l.bracket(&l.basis_element(0), &l.basis_element(1));
        assert!(matches!(r, Err(Error::TruncationExceeded(_))));
        assert_eq!(l.verify_axioms().violation, None);
    }

    #[test]
    fn parse_and_format() {
        let field = f(5);
        let l = LieAlgebra::new("w", field, vec!["e-1".into(), "e0".into(), "x*e12".into()]).unwrap();
        let a = l.parse_element("2*e0 - e-1 + x*e12").unwrap();
        assert_eq!(l.format(&a), "-e-1 + 2*e0 + x*e12");
        assert_eq!(l.parse_element(&l.format(&a)).unwrap(), a);
        assert!(l.parse_element("e7").is_err());
        assert!(l.parse_element("e0 +").is_err());
    }

    #[test]
    fn decomposition_checks() {
        let l = sl2(f(3));
        let ideal = l.span(&[l.element("e").unwrap()]);
        let d = SemidirectDecomposition::new(ideal, vec![l.element("h").unwrap(), l.element("f").unwrap()]);
        assert!(matches!(d.check(&l), Some(DecompositionIssue::NotIdeal { .. })));
    }
}
