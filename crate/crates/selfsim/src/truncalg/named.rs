//! Named subalgebras of `Der X` with their abstract presentations.

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::lie::{AxiomReport, LieAlgebra, LieElement};
use crate::linalg::{CoordinateSolver, SparseVec};

use super::{Derivation, Monomial, TruncPolyAlgebra};

/// An abstract Lie algebra together with a basis-to-derivation map into
/// `Der X`.
#[derive(Clone, Debug)]
pub struct DerivationRealization {
    pub algebra: LieAlgebra,
    pub alphabet: TruncPolyAlgebra,
    pub images: Vec<Derivation>,
    pub axioms: AxiomReport,
}

impl DerivationRealization {
    /// Image of an element under the linear extension of the basis map.
    pub fn image(&self, a: &LieElement) -> Derivation {
        let mut out = Derivation::zero(self.alphabet.nvars());
        for (i, c) in a.coeffs() {
            out.add_scaled(c, &self.images[*i]);
        }
        out
    }

    /// First basis pair where the map fails to respect brackets.
    pub fn homomorphism_defect(&self) -> Result<Option<(String, String)>> {
        let n = self.algebra.dim();
        for i in 0..n {
            for j in i + 1..n {
                let lhs = self.image(&self.algebra.bracket(
                    &self.algebra.basis_element(i),
                    &self.algebra.basis_element(j),
                )?);
                let rhs = self.alphabet.derivation_bracket(&self.images[i], &self.images[j])?;
                if lhs != rhs {
                    return Ok(Some((
                        self.algebra.symbol(i).to_string(),
                        self.algebra.symbol(j).to_string(),
                    )));
                }
            }
        }
        Ok(None)
    }
}

/// Builds the abstract algebra spanned by linearly independent derivations
/// closed under the bracket, reading structure constants off the
/// derivation brackets.
pub fn from_derivations(
    name: &str,
    alphabet: TruncPolyAlgebra,
    symbols: Vec<String>,
    images: Vec<Derivation>,
) -> Result<DerivationRealization> {
    let field = alphabet.field();
    let coords: Vec<SparseVec> = images.iter().map(|d| alphabet.derivation_to_vec(d)).collect();
    let solver = CoordinateSolver::new(field, &coords)
        .map_err(|_| Error::InvalidParameter(format!("{name}: derivations are dependent")))?;
    let mut algebra = LieAlgebra::new(name, field, symbols)?;
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            let b = alphabet.derivation_bracket(&images[i], &images[j])?;
            let c = solver.solve(&alphabet.derivation_to_vec(&b)).ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "{name}: span not closed at ({}, {})",
                    algebra.symbol(i),
                    algebra.symbol(j)
                ))
            })?;
            algebra.set_bracket(i, j, c);
        }
    }
    let axioms = algebra.verify_axioms();
    Ok(DerivationRealization {
        algebra,
        alphabet,
        images,
        axioms,
    })
}

fn require_char_p(field: FieldSpec, what: &str) -> Result<u32> {
    match field.characteristic() {
        0 => Err(Error::HypothesisViolated(format!("{what} requires char(k) = p > 0"))),
        p => Ok(p),
    }
}

/// The Witt algebra `W(1)` on `e_i = x^{i+1} ∂`, `-1 ≤ i ≤ p-2`, with
/// symbols `e-1, e0, …`.
pub fn witt(p: u32) -> Result<DerivationRealization> {
    let x = TruncPolyAlgebra::cyclic(p)?;
    let symbols = (-1..=p as i64 - 2).map(|i| format!("e{i}")).collect();
    let images = (0..p).map(|k| x.derivation_term(x.monomial(Monomial(vec![k])), 0)).collect();
    from_derivations("witt", x, symbols, images)
}

/// All of `Der X` for `X = k[x_1..x_n]/(x_i^p)`, basis `monomial · ∂_i`.
pub fn jacobson_witt(n: usize, p: u32) -> Result<DerivationRealization> {
    let x = TruncPolyAlgebra::new(FieldSpec::prime(p)?, n, None)?;
    let mut symbols = Vec::new();
    let mut images = Vec::new();
    for i in 0..n {
        for m in x.basis() {
            let d = x.derivation_term(x.monomial(m.clone()), i);
            symbols.push(x.format_derivation(&d));
            images.push(d);
        }
    }
    from_derivations("jacobson_witt", x, symbols, images)
}

/// The Frank algebra: `y_i = ∂_i`, `y_{i,j} = x_i ∂_j` for `i ≠ j`, and the
/// diagonal differences `y_{j,j} - y_{1,1}` for `2 ≤ j ≤ n`.
pub fn frank(n: usize, field: FieldSpec) -> Result<DerivationRealization> {
    require_char_p(field, "the Frank algebra")?;
    let x = TruncPolyAlgebra::new(field, n, None)?;
    let (symbols, images) = frank_basis(&x);
    from_derivations("frank", x, symbols, images)
}

pub(crate) fn frank_basis(x: &TruncPolyAlgebra) -> (Vec<String>, Vec<Derivation>) {
    let n = x.nvars();
    let mut symbols = Vec::new();
    let mut images = Vec::new();
    for i in 0..n {
        symbols.push(format!("y{}", i + 1));
        images.push(x.partial(i));
    }
    for i in 0..n {
        for j in 0..n {
            if i != j {
                symbols.push(format!("y{},{}", i + 1, j + 1));
                images.push(x.derivation_term(x.var(i), j));
            }
        }
    }
    for j in 1..n {
        symbols.push(format!("y{0},{0}-y1,1", j + 1));
        images.push(x.derivation_term(x.var(j), j).minus(&x.derivation_term(x.var(0), 0)));
    }
    (symbols, images)
}

fn sl_symbol(a: usize, b: usize) -> String {
    format!("E{a},{b}")
}

fn ensure_sl_hypothesis(n: usize, field: FieldSpec) -> Result<()> {
    let p = field.characteristic();
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if p > 0 && (n as u32 + 1) % p == 0 {
        return Err(Error::HypothesisViolated(format!(
            "char(k) does not divide n+1 (p = {p}, n + 1 = {})",
            n + 1
        )));
    }
    Ok(())
}

/// `sl_{n+1}` on the matrix units: basis `E_{a,b}` for `a ≠ b` and
/// `E_{i,i}` for `i ≤ n`, ordered lexicographically. Brackets follow
/// `E_{a,b} E_{c,d} = δ_{b,c} E_{a,d}`, with `E_{n+1,n+1}` rewritten as
/// `-Σ_{i ≤ n} E_{i,i}` (the identity is central and dropped). Requires
/// `char(k) ∤ n+1`, so that this quotient is `sl_{n+1}`.
pub fn sl_matrix_algebra(n: usize, field: FieldSpec) -> Result<LieAlgebra> {
    ensure_sl_hypothesis(n, field)?;
    let size = n + 1;
    let mut units = Vec::new();
    for a in 1..=size {
        for b in 1..=size {
            if !(a == size && b == size) {
                units.push((a, b));
            }
        }
    }
    let symbols = units.iter().map(|(a, b)| sl_symbol(*a, *b)).collect();
    let mut algebra = LieAlgebra::new(format!("sl{size}"), field, symbols)?;
    let position = |a: usize, b: usize| units.iter().position(|u| *u == (a, b));
    let unit_vec = |a: usize, b: usize| -> SparseVec {
        match position(a, b) {
            Some(k) => SparseVec::unit(k, field),
            None => SparseVec::from_entries((1..=n).map(|i| (position(i, i).unwrap(), -field.one()))),
        }
    };
    for (s, &(a, b)) in units.iter().enumerate() {
        for (t, &(c, d)) in units.iter().enumerate().skip(s + 1) {
            let mut out = SparseVec::new();
            if b == c {
                out = out.plus(&unit_vec(a, d));
            }
            if d == a {
                out = out.minus(&unit_vec(c, b));
            }
            algebra.set_bracket(s, t, out);
        }
    }
    Ok(algebra)
}

/// The derivation of `X = k[x_1..x_n]/(x_i^p)` realizing `E_{a,b}`:
/// `E_{i,j} = -x_j ∂_i`, `E_{n+1,i} = -x_i Σ_j x_j ∂_j`, `E_{i,n+1} = ∂_i`,
/// `E_{n+1,n+1} = Σ_i x_i ∂_i` (indices one-based).
pub fn sl_derivation(x: &TruncPolyAlgebra, a: usize, b: usize) -> Result<Derivation> {
    let n = x.nvars();
    let euler = (0..n).fold(Derivation::zero(n), |acc, j| acc.plus(&x.derivation_term(x.var(j), j)));
    let minus_one = -x.field().one();
    Ok(match (a <= n, b <= n) {
        (true, true) => x.derivation_term(x.var(b - 1), a - 1).scaled(&minus_one),
        (false, true) => {
            let xi = x.var(b - 1);
            let images = euler
                .images()
                .iter()
                .map(|f| x.mul(&xi, f))
                .collect::<Result<Vec<_>>>()?;
            Derivation::from_images(images).scaled(&minus_one)
        }
        (true, false) => x.partial(a - 1),
        (false, false) => euler,
    })
}

/// `sl_{n+1}` acting on `X` in `n` variables through [`sl_derivation`].
pub fn sl_realization(n: usize, field: FieldSpec) -> Result<DerivationRealization> {
    ensure_sl_hypothesis(n, field)?;
    let x = match field.characteristic() {
        0 => TruncPolyAlgebra::new(field, n, Some(4))?,
        _ => TruncPolyAlgebra::new(field, n, None)?,
    };
    let algebra = sl_matrix_algebra(n, field)?;
    let images = algebra
        .symbols()
        .iter()
        .map(|s| {
            let (a, b) = parse_sl_symbol(s).expect("generated symbol");
            sl_derivation(&x, a, b)
        })
        .collect::<Result<Vec<_>>>()?;
    let axioms = algebra.verify_axioms();
    Ok(DerivationRealization {
        algebra,
        alphabet: x,
        images,
        axioms,
    })
}

/// The element `E_{a,b}` of [`sl_matrix_algebra`], with
/// `E_{n+1,n+1} = -Σ_{i ≤ n} E_{i,i}`.
pub fn sl_unit(algebra: &LieAlgebra, n: usize, a: usize, b: usize) -> LieElement {
    if a == n + 1 && b == n + 1 {
        let minus_one = -algebra.field().one();
        (1..=n).fold(algebra.zero(), |acc, i| {
            acc.plus(&algebra.element(&sl_symbol(i, i)).expect("diagonal unit").scaled(&minus_one))
        })
    } else {
        algebra.element(&sl_symbol(a, b)).expect("matrix unit")
    }
}

/// Reads `E{a},{b}` back into `(a, b)`.
pub fn parse_sl_symbol(s: &str) -> Option<(usize, usize)> {
    let (a, b) = s.strip_prefix('E')?.split_once(',')?;
    Some((a.parse().ok()?, b.parse().ok()?))
}

/// Heisenberg algebra `y_1 = ∂_1`, `y_2 = ∂_2`, `y_3 = x_1 ∂_2`, so that
/// `[y_1, y_3] = y_2`. With `central`, a fourth variable carries the central
/// `y_4 = ∂_3`.
pub fn heisenberg_realization(field: FieldSpec, central: bool, degree_bound: Option<u32>) -> Result<DerivationRealization> {
    let n = if central { 3 } else { 2 };
    let x = TruncPolyAlgebra::new(field, n, degree_bound)?;
    let mut symbols = vec!["y1".to_string(), "y2".into(), "y3".into()];
    let mut images = vec![x.partial(0), x.partial(1), x.derivation_term(x.var(0), 1)];
    if central {
        symbols.push("y4".into());
        images.push(x.partial(2));
    }
    from_derivations("heisenberg", x, symbols, images)
}

/// Dispatch by name: `witt`, `jacobson_witt`, `frank`, `sl_realization`,
/// `heisenberg_realization`.
pub fn named_derivation_algebra(name: &str, p: u32, n: usize) -> Result<DerivationRealization> {
    let field = FieldSpec::prime(p)?;
    match name {
        "witt" => witt(p),
        "jacobson_witt" => jacobson_witt(n, p),
        "frank" => frank(n, field),
        "sl_realization" => sl_realization(n, field),
        "heisenberg_realization" => heisenberg_realization(field, false, None),
        other => Err(Error::InvalidParameter(format!("unknown derivation algebra {other}"))),
    }
}
