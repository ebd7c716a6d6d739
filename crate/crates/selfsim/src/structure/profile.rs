use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::VirtualEndomorphism;
use crate::error::{Error, Result};
use crate::field::{factorial, FieldSpec, Scalar};
use crate::lie::LieElement;
use crate::linalg::{CoordinateSolver, SparseVec};
use crate::truncalg::{frank_basis, from_derivations, Derivation, DerivationRealization, Monomial, TruncPolyAlgebra};

/// Which family of compatibility identities applies, fixed by the shape of
/// `L_0` inside `Der X`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum ConditionProfile {
    /// `L_0` abelian with basis `y_i ↦ ∂_i`.
    #[serde(rename = "abelian_B")]
    AbelianB,
    /// `L_0 = span{e_{-1}, …, e_{j0}}` inside the Witt algebra.
    #[serde(rename = "witt_sl2")]
    WittSl2 { j0: u32 },
    /// The Frank algebra in `n` variables.
    #[serde(rename = "frank")]
    Frank { n: usize },
    /// `sl_{n+1}` realized on `y_{i,j} = x_i ∂_j`.
    #[serde(rename = "sl_np1")]
    SlNp1 { n: usize },
    /// Heisenberg `y_1 = ∂_1, y_2 = ∂_2, y_3 = x_1 ∂_2`.
    #[serde(rename = "heisenberg")]
    Heisenberg,
    /// Heisenberg plus the central `y_4 = ∂_{x_4}` (third variable).
    #[serde(rename = "heisenberg_central")]
    HeisenbergCentral,
}

impl fmt::Display for ConditionProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConditionProfile::AbelianB => write!(f, "abelian_B"),
            ConditionProfile::WittSl2 { j0 } => write!(f, "witt_sl2:{j0}"),
            ConditionProfile::Frank { n } => write!(f, "frank:{n}"),
            ConditionProfile::SlNp1 { n } => write!(f, "sl_np1:{n}"),
            ConditionProfile::Heisenberg => write!(f, "heisenberg"),
            ConditionProfile::HeisenbergCentral => write!(f, "heisenberg_central"),
        }
    }
}

impl FromStr for ConditionProfile {
    type Err = Error;

    /// `abelian_B`, `witt_sl2:J0`, `frank:N`, `sl_np1:N`, `heisenberg`,
    /// `heisenberg_central`.
    fn from_str(s: &str) -> Result<Self> {
        let (family, arg) = match s.split_once(':') {
            Some((f, a)) => (f, Some(a)),
            None => (s, None),
        };
        let number = |what: &str| -> Result<usize> {
            arg.ok_or_else(|| Error::Parse(format!("profile {family} needs :{what}")))?
                .parse()
                .map_err(|_| Error::Parse(format!("bad {what} in profile {s}")))
        };
        Ok(match family {
            "abelian_B" => ConditionProfile::AbelianB,
            "witt_sl2" => ConditionProfile::WittSl2 { j0: number("j0")? as u32 },
            "frank" => ConditionProfile::Frank { n: number("n")? },
            "sl_np1" => ConditionProfile::SlNp1 { n: number("n")? },
            "heisenberg" => ConditionProfile::Heisenberg,
            "heisenberg_central" => ConditionProfile::HeisenbergCentral,
            other => return Err(Error::Parse(format!("unknown profile {other}"))),
        })
    }
}

impl ConditionProfile {
    /// Number of variables of `X`. The abelian profile uses one per
    /// complement basis element.
    pub fn nvars(&self, complement_len: usize) -> usize {
        match self {
            ConditionProfile::AbelianB => complement_len,
            ConditionProfile::WittSl2 { .. } => 1,
            ConditionProfile::Frank { n } | ConditionProfile::SlNp1 { n } => *n,
            ConditionProfile::Heisenberg => 2,
            ConditionProfile::HeisenbergCentral => 3,
        }
    }

    /// Positions of `y_1..y_n` in the canonical `L_0` basis.
    pub fn section_indices(&self, complement_len: usize) -> Vec<usize> {
        match self {
            ConditionProfile::HeisenbergCentral => vec![0, 1, 3],
            _ => (0..self.nvars(complement_len)).collect(),
        }
    }

    /// The alphabet: `x_i^p = 0` in characteristic `p`, otherwise degree
    /// at most `max(n(m-1), 1)`.
    pub fn alphabet(&self, field: FieldSpec, complement_len: usize, order: u32) -> Result<TruncPolyAlgebra> {
        let n = self.nvars(complement_len);
        match field.characteristic() {
            0 => TruncPolyAlgebra::new(field, n, Some((n as u32 * order.saturating_sub(1)).max(1))),
            _ => TruncPolyAlgebra::new(field, n, None),
        }
    }

    fn requirements(&self, field: FieldSpec) -> Result<Vec<String>> {
        let p = field.characteristic();
        let mut notes = Vec::new();
        let need_p = |what: &str| -> Result<()> {
            if p == 0 {
                return Err(Error::HypothesisViolated(format!("{what} requires char(k) = p > 0")));
            }
            Ok(())
        };
        match self {
            ConditionProfile::WittSl2 { j0 } => {
                need_p("the witt_sl2 profile")?;
                if !(*j0 <= 1 || *j0 + 2 == p) {
                    return Err(Error::HypothesisViolated(format!(
                        "L_0 = span{{e-1..e{j0}}} needs j0 ≤ 1 or j0 = p - 2 (p = {p})"
                    )));
                }
                if *j0 + 2 > p {
                    return Err(Error::HypothesisViolated(format!("e{j0} does not exist for p = {p}")));
                }
                if p == 2 {
                    notes.push(
                        "p = 2: further choices of L_0 inside span{e-1, e0, e1} exist and are not covered".into(),
                    );
                }
            }
            ConditionProfile::Frank { n } => {
                need_p("the frank profile")?;
                if *n == 0 {
                    return Err(Error::InvalidParameter("n must be at least 1".into()));
                }
            }
            ConditionProfile::SlNp1 { n } => {
                need_p("the sl_np1 profile")?;
                if *n == 0 {
                    return Err(Error::InvalidParameter("n must be at least 1".into()));
                }
                if (*n as u32 + 1) % p == 0 {
                    return Err(Error::HypothesisViolated(format!(
                        "char(k) does not divide n+1 (p = {p}, n + 1 = {})",
                        n + 1
                    )));
                }
            }
            _ => {}
        }
        Ok(notes)
    }

    /// Symbols and derivations of the canonical `L_0` basis.
    pub fn l0_basis(&self, x: &TruncPolyAlgebra, complement_len: usize) -> (Vec<String>, Vec<Derivation>) {
        let n = x.nvars();
        match self {
            ConditionProfile::AbelianB => (
                (1..=complement_len).map(|i| format!("y{i}")).collect(),
                (0..complement_len).map(|i| x.partial(i)).collect(),
            ),
            ConditionProfile::WittSl2 { j0 } => (
                (-1..=*j0 as i64).map(|i| format!("e{i}")).collect(),
                (0..=*j0 + 1)
                    .map(|k| x.derivation_term(x.monomial(Monomial(vec![k])), 0))
                    .collect(),
            ),
            ConditionProfile::Frank { .. } => frank_basis(x),
            ConditionProfile::SlNp1 { .. } => {
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
                for j in 0..n {
                    symbols.push(format!("y{},{}", j + 1, n + 1));
                    let images_j = (0..n)
                        .map(|k| x.mul(&x.var(j), &x.var(k)).expect("quadratic term"))
                        .collect();
                    images.push(Derivation::from_images(images_j));
                }
                for j in 0..n {
                    symbols.push(format!("y{0},{0}", j + 1));
                    images.push(x.derivation_term(x.var(j), j));
                }
                (symbols, images)
            }
            ConditionProfile::Heisenberg | ConditionProfile::HeisenbergCentral => {
                let mut symbols = vec!["y1".to_string(), "y2".into(), "y3".into()];
                let mut images = vec![x.partial(0), x.partial(1), x.derivation_term(x.var(0), 1)];
                if matches!(self, ConditionProfile::HeisenbergCentral) {
                    symbols.push("y4".into());
                    images.push(x.partial(2));
                }
                (symbols, images)
            }
        }
    }

    /// The canonical `L_0` as an abstract algebra realized in `Der X`.
    pub fn l0_realization(&self, field: FieldSpec, complement_len: usize, order: u32) -> Result<DerivationRealization> {
        self.requirements(field)?;
        let x = self.alphabet(field, complement_len, order)?;
        let (symbols, images) = self.l0_basis(&x, complement_len);
        from_derivations(&format!("L0[{self}]"), x, symbols, images)
    }

    /// Derivation images of the complement basis of `ve`, in canonical order.
    pub fn l0_images(&self, ve: &VirtualEndomorphism) -> Result<(TruncPolyAlgebra, Vec<Derivation>)> {
        let x = self.alphabet(ve.field(), ve.complement().len(), ve.order())?;
        let (_, images) = self.l0_basis(&x, ve.complement().len());
        Ok((x, images))
    }
}

/// The first identity that fails, with the instance that breaks it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionFailure {
    pub stage: String,
    pub identity: String,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub profile: String,
    pub instances_checked: usize,
    /// Instances whose evaluation leaves the truncation.
    pub instances_skipped: usize,
    pub failure: Option<ConditionFailure>,
    pub notes: Vec<String>,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

struct Checker<'a> {
    ve: &'a VirtualEndomorphism,
    letters: Vec<LieElement>,
    l0: &'a [LieElement],
    m: u32,
    field: FieldSpec,
    checked: usize,
    skipped: usize,
}

/// All tuples in `[0, m-1]^n`, first coordinate slowest.
pub(super) fn tuples(n: usize, m: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..m).map(move |i| {
                    let mut next = t.clone();
                    next.push(i);
                    next
                })
            })
            .collect();
    }
    out
}

fn show_tuple(t: &[u32]) -> String {
    let inner: Vec<String> = t.iter().map(u32::to_string).collect();
    format!("({})", inner.join(","))
}

impl Checker<'_> {
    /// `θ(y^I [tail] ∘ h)`, or `None` outside the truncation.
    fn eval(&self, exps: &[u32], tail: Option<&LieElement>, h: &LieElement) -> Result<Option<LieElement>> {
        let l = self.ve.algebra();
        let run = || -> Result<LieElement> {
            let mut v = h.clone();
            if let Some(t) = tail {
                v = l.bracket(t, &v)?;
            }
            let v = l.ad_word(&self.letters, exps, &v)?;
            self.ve.theta(&v)
        };
        match run() {
            Ok(v) => Ok(Some(v)),
            Err(Error::TruncationExceeded(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }

    fn expect(
        &mut self,
        identity: &str,
        context: impl FnOnce() -> String,
        lhs: Option<LieElement>,
        rhs: Option<LieElement>,
    ) -> Option<ConditionFailure> {
        let (Some(lhs), Some(rhs)) = (lhs, rhs) else {
            self.skipped += 1;
            return None;
        };
        self.checked += 1;
        if lhs == rhs {
            return None;
        }
        let l = self.ve.algebra();
        Some(ConditionFailure {
            stage: "identities".into(),
            identity: identity.into(),
            witness: format!("{}: lhs = {}, rhs = {}", context(), l.format(&lhs), l.format(&rhs)),
        })
    }

    fn scalar(&self, k: i64) -> Scalar {
        self.field.from_i64(k)
    }

    fn scaled(&self, v: Option<LieElement>, c: &Scalar) -> Option<LieElement> {
        v.map(|v| v.scaled(c))
    }

    fn nilpotence(&mut self, h: &LieElement, names: &[&str]) -> Result<Option<ConditionFailure>> {
        let n = self.letters.len();
        for i in 0..n {
            let mut exps = vec![0; n];
            exps[i] = self.m;
            let lhs = self.eval(&exps, None, h)?;
            let hs = h.clone();
            let l = self.ve.algebra().clone();
            if let Some(f) = self.expect(
                &format!("θ({}^m ∘ h) = 0", names[i]),
                || format!("h = {}, m = {}", l.format(&hs), exps[i]),
                lhs,
                Some(LieElement::zero()),
            ) {
                return Ok(Some(f));
            }
        }
        Ok(None)
    }

    /// Shifts from `y_{k,j} = x_k ∂_j`, shared by the Frank and sl profiles.
    fn shifts(&mut self, h: &LieElement, n: usize) -> Result<Option<ConditionFailure>> {
        let mut pos = n;
        for k in 0..n {
            for j in 0..n {
                if k == j {
                    continue;
                }
                let ykj = self.l0[pos].clone();
                pos += 1;
                for t in tuples(n, self.m) {
                    let lhs = self.eval(&t, Some(&ykj), h)?;
                    let rhs = if t[k] >= 1 && t[j] + 2 <= self.m {
                        let mut shifted = t.clone();
                        shifted[k] -= 1;
                        shifted[j] += 1;
                        let c = self.scalar(t[k] as i64);
                        self.scaled(self.eval(&shifted, None, h)?, &c)
                    } else {
                        Some(LieElement::zero())
                    };
                    let l = self.ve.algebra().clone();
                    if let Some(f) = self.expect(
                        "θ(y^I y_{k,j} ∘ h) = i_k θ(y^{I-e_k+e_j} ∘ h), and 0 when i_k = 0 or i_j = p-1",
                        || format!("h = {}, I = {}, k = {}, j = {}", l.format(h), show_tuple(&t), k + 1, j + 1),
                        lhs,
                        rhs,
                    ) {
                        return Ok(Some(f));
                    }
                }
            }
        }
        Ok(None)
    }

    fn run(&mut self, profile: &ConditionProfile, h: &LieElement) -> Result<Option<ConditionFailure>> {
        let l = self.ve.algebra().clone();
        match profile {
            ConditionProfile::AbelianB => {
                let names: Vec<String> = (1..=self.letters.len()).map(|i| format!("y{i}")).collect();
                let refs: Vec<&str> = names.iter().map(String::as_str).collect();
                self.nilpotence(h, &refs)
            }
            ConditionProfile::WittSl2 { j0 } => {
                if let Some(f) = self.nilpotence(h, &["e-1"])? {
                    return Ok(Some(f));
                }
                let p = self.m;
                for j in 0..=*j0 {
                    let ej = self.l0[j as usize + 1].clone();
                    for i in 0..=j.min(p - 1) {
                        let lhs = self.eval(&[i], Some(&ej), h)?;
                        if let Some(f) = self.expect(
                            "θ(e_{-1}^i e_j ∘ h) = 0 for 0 ≤ i ≤ j",
                            || format!("h = {}, i = {i}, j = {j}", l.format(h)),
                            lhs,
                            Some(LieElement::zero()),
                        ) {
                            return Ok(Some(f));
                        }
                    }
                    for i in j + 1..p {
                        let left_c = factorial(i, self.field);
                        let right_c = factorial(i - j - 1, self.field);
                        let lhs = self.scaled(self.eval(&[i - j], None, h)?, &left_c);
                        let rhs = self.scaled(self.eval(&[i], Some(&ej), h)?, &right_c);
                        if let Some(f) = self.expect(
                            "i! θ(e_{-1}^{i-j} ∘ h) = (i-j-1)! θ(e_{-1}^i e_j ∘ h) for j+1 ≤ i ≤ p-1",
                            || format!("h = {}, i = {i}, j = {j}", l.format(h)),
                            lhs,
                            rhs,
                        ) {
                            return Ok(Some(f));
                        }
                    }
                }
                Ok(None)
            }
            ConditionProfile::Frank { n } => {
                let n = *n;
                let names: Vec<String> = (1..=n).map(|i| format!("y{i}")).collect();
                let refs: Vec<&str> = names.iter().map(String::as_str).collect();
                if let Some(f) = self.nilpotence(h, &refs)? {
                    return Ok(Some(f));
                }
                if let Some(f) = self.shifts(h, n)? {
                    return Ok(Some(f));
                }
                let base = n + n * (n - 1);
                for j in 1..n {
                    let diff = self.l0[base + j - 1].clone();
                    for t in tuples(n, self.m) {
                        let lhs = self.eval(&t, Some(&diff), h)?;
                        let c = self.scalar(t[j] as i64 - t[0] as i64);
                        let rhs = self.scaled(self.eval(&t, None, h)?, &c);
                        if let Some(f) = self.expect(
                            "θ(y^I (y_{j,j} - y_{1,1}) ∘ h) = (i_j - i_1) θ(y^I ∘ h) for 2 ≤ j ≤ n",
                            || format!("h = {}, I = {}, j = {}", l.format(h), show_tuple(&t), j + 1),
                            lhs,
                            rhs,
                        ) {
                            return Ok(Some(f));
                        }
                    }
                }
                Ok(None)
            }
            ConditionProfile::SlNp1 { n } => {
                let n = *n;
                let names: Vec<String> = (1..=n).map(|i| format!("y{i}")).collect();
                let refs: Vec<&str> = names.iter().map(String::as_str).collect();
                if let Some(f) = self.nilpotence(h, &refs)? {
                    return Ok(Some(f));
                }
                if let Some(f) = self.shifts(h, n)? {
                    return Ok(Some(f));
                }
                let radial = n * n;
                let diagonal = n * n + n;
                for j in 0..n {
                    let yjj = self.l0[diagonal + j].clone();
                    for t in tuples(n, self.m) {
                        let lhs = self.eval(&t, Some(&yjj), h)?;
                        let c = self.scalar(t[j] as i64);
                        let rhs = self.scaled(self.eval(&t, None, h)?, &c);
                        if let Some(f) = self.expect(
                            "θ(y^I y_{j,j} ∘ h) = i_j θ(y^I ∘ h)",
                            || format!("h = {}, I = {}, j = {}", l.format(h), show_tuple(&t), j + 1),
                            lhs,
                            rhs,
                        ) {
                            return Ok(Some(f));
                        }
                    }
                }
                for j in 0..n {
                    let yjr = self.l0[radial + j].clone();
                    for t in tuples(n, self.m) {
                        let lhs = self.eval(&t, Some(&yjr), h)?;
                        let rhs = if t[j] >= 1 {
                            let total: i64 = t.iter().map(|&e| e as i64).sum();
                            let c = self.scalar(t[j] as i64 * (total - 1));
                            let mut lower = t.clone();
                            lower[j] -= 1;
                            self.scaled(self.eval(&lower, None, h)?, &c)
                        } else {
                            Some(LieElement::zero())
                        };
                        if let Some(f) = self.expect(
                            "θ(y^I y_{j,n+1} ∘ h) = i_j (|I| - 1) θ(y^{I-e_j} ∘ h), and 0 when i_j = 0",
                            || format!("h = {}, I = {}, j = {}", l.format(h), show_tuple(&t), j + 1),
                            lhs,
                            rhs,
                        ) {
                            return Ok(Some(f));
                        }
                    }
                }
                Ok(None)
            }
            ConditionProfile::Heisenberg | ConditionProfile::HeisenbergCentral => {
                let names: &[&str] = if self.letters.len() == 3 { &["y1", "y2", "y4"] } else { &["y1", "y2"] };
                if let Some(f) = self.nilpotence(h, names)? {
                    return Ok(Some(f));
                }
                let y3 = self.l0[2].clone();
                let n = self.letters.len();
                let mut e1 = vec![0; n];
                e1[0] = 1;
                let mut e2 = vec![0; n];
                e2[1] = 1;
                let lhs = self.eval(&e1, Some(&y3), h)?;
                let rhs = self.eval(&e2, None, h)?;
                if let Some(f) =
                    self.expect("θ(y_1 y_3 ∘ h) = θ(y_2 ∘ h)", || format!("h = {}", l.format(h)), lhs, rhs)
                {
                    return Ok(Some(f));
                }
                let lhs = self.eval(&vec![0; n], Some(&y3), h)?;
                Ok(self.expect(
                    "θ(y_3 ∘ h) = 0",
                    || format!("h = {}", l.format(h)),
                    lhs,
                    Some(LieElement::zero()),
                ))
            }
        }
    }
}

fn fail(profile: &ConditionProfile, stage: &str, identity: &str, witness: String, notes: Vec<String>) -> ConditionReport {
    ConditionReport {
        profile: profile.to_string(),
        instances_checked: 0,
        instances_skipped: 0,
        failure: Some(ConditionFailure {
            stage: stage.into(),
            identity: identity.into(),
            witness,
        }),
        notes,
    }
}

/// Checks, in order: the decomposition `L = H ⋉ L_0`, the profile's
/// hypotheses on `L_0`, that `θ` is a homomorphism on `H`, and the family's
/// identities exhaustively over the spanning family of `H` and all exponent
/// tuples in `[0, m-1]^n`.
pub fn check_conditions(profile: &ConditionProfile, ve: &VirtualEndomorphism) -> Result<ConditionReport> {
    let l = ve.algebra();
    let field = ve.field();
    let mut notes = Vec::new();
    if l.is_truncated() {
        notes.push(format!(
            "identities checked over the basis of H up to degree {}",
            l.degree_bound().unwrap_or_default()
        ));
    }
    if let Some(issue) = ve.decomposition().check(l) {
        return Ok(fail(profile, "decomposition", "L = H ⋉ L_0", issue.to_string(), notes));
    }
    match profile.requirements(field) {
        Ok(extra) => notes.extend(extra),
        Err(e) => return Ok(fail(profile, "profile", "profile hypotheses", e.to_string(), notes)),
    }
    let (x, derivations) = profile.l0_images(ve)?;
    if derivations.len() != ve.complement().len() {
        return Ok(fail(
            profile,
            "profile",
            "dim L_0 matches the profile",
            format!("L_0 has {} basis elements, the profile expects {}", ve.complement().len(), derivations.len()),
            notes,
        ));
    }
    let expected_section = profile.section_indices(ve.complement().len());
    if ve.section_indices() != expected_section.as_slice() {
        return Ok(fail(
            profile,
            "profile",
            "section basis matches the profile",
            format!("section {:?}, expected {:?}", ve.section_indices(), expected_section),
            notes,
        ));
    }
    // L_0 must map onto the profile's derivations as a Lie algebra.
    let complement_vecs: Vec<SparseVec> = ve.complement().iter().map(|c| c.coeffs().clone()).collect();
    let solver = CoordinateSolver::new(field, &complement_vecs)?;
    for a in 0..derivations.len() {
        for b in a + 1..derivations.len() {
            let bracket = l.bracket(&ve.complement()[a], &ve.complement()[b])?;
            let coords = solver
                .solve(bracket.coeffs())
                .ok_or_else(|| Error::Decomposition("L_0 is not closed under the bracket".into()))?;
            let mut lhs = Derivation::zero(x.nvars());
            for (k, c) in &coords {
                lhs.add_scaled(c, &derivations[*k]);
            }
            let rhs = x.derivation_bracket(&derivations[a], &derivations[b])?;
            if lhs != rhs {
                return Ok(fail(
                    profile,
                    "profile",
                    "L_0 realizes the profile's derivation algebra",
                    format!(
                        "[{}, {}] maps to {} but the derivations bracket to {}",
                        l.format(&ve.complement()[a]),
                        l.format(&ve.complement()[b]),
                        x.format_derivation(&lhs),
                        x.format_derivation(&rhs)
                    ),
                    notes,
                ));
            }
        }
    }
    if let Some([h1, h2, lhs, rhs]) = ve.homomorphism_defect()? {
        return Ok(fail(
            profile,
            "theta",
            "θ([h1, h2]) = [θ(h1), θ(h2)]",
            format!("h1 = {h1}, h2 = {h2}: lhs = {lhs}, rhs = {rhs}"),
            notes,
        ));
    }
    let letters = ve.section();
    let outcomes = ve
        .domain()
        .par_iter()
        .map(|h| {
            let mut checker = Checker {
                ve,
                letters: letters.clone(),
                l0: ve.complement(),
                m: ve.order(),
                field,
                checked: 0,
                skipped: 0,
            };
            let failure = checker.run(profile, h)?;
            Ok((checker.checked, checker.skipped, failure))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = ConditionReport {
        profile: profile.to_string(),
        instances_checked: 0,
        instances_skipped: 0,
        failure: None,
        notes,
    };
    for (checked, skipped, failure) in outcomes {
        report.instances_checked += checked;
        report.instances_skipped += skipped;
        if report.failure.is_none() {
            report.failure = failure;
        }
    }
    Ok(report)
}
