//! Sparse exact linear algebra: vectors, echelon subspaces, kernels and
//! operator closures.

use std::collections::btree_map::{self, Entry};
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

/// A sparse vector over basis indices. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: BTreeMap<usize, Scalar>,
}

impl SparseVec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit(index: usize, field: FieldSpec) -> Self {
        let mut v = Self::new();
        v.entries.insert(index, field.one());
        v
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (usize, Scalar)>) -> Self {
        let mut v = Self::new();
        for (i, c) in entries {
            v.add_term(i, &c);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, index: usize) -> Option<&Scalar> {
        self.entries.get(&index)
    }

    pub fn iter(&self) -> btree_map::Iter<'_, usize, Scalar> {
        self.entries.iter()
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    /// Smallest index with a nonzero coefficient.
    pub fn leading(&self) -> Option<(usize, &Scalar)> {
        self.entries.iter().next().map(|(i, c)| (*i, c))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.keys().next_back().copied()
    }

    /// `self[index] += coeff`.
    pub fn add_term(&mut self, index: usize, coeff: &Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.entries.entry(index) {
            Entry::Vacant(e) => {
                e.insert(coeff.clone());
            }
            Entry::Occupied(mut e) => {
                let sum = &*e.get() + coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// `self += coeff * other`.
    pub fn add_scaled(&mut self, coeff: &Scalar, other: &SparseVec) {
        if coeff.is_zero() {
            return;
        }
        for (i, c) in &other.entries {
            self.add_term(*i, &(coeff * c));
        }
    }

    pub fn scaled(&self, coeff: &Scalar) -> SparseVec {
        if coeff.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, c)| (*i, coeff * c)).collect(),
        }
    }

    pub fn neg(&self) -> SparseVec {
        SparseVec {
            entries: self.entries.iter().map(|(i, c)| (*i, -c)).collect(),
        }
    }

    pub fn plus(&self, other: &SparseVec) -> SparseVec {
        let mut out = self.clone();
        for (i, c) in &other.entries {
            out.add_term(*i, c);
        }
        out
    }

    pub fn minus(&self, other: &SparseVec) -> SparseVec {
        let mut out = self.clone();
        for (i, c) in &other.entries {
            out.add_term(*i, &-c);
        }
        out
    }

    /// Re-indexes every entry through `f`.
    pub fn map_indices(&self, mut f: impl FnMut(usize) -> usize) -> SparseVec {
        SparseVec::from_entries(self.entries.iter().map(|(i, c)| (f(*i), c.clone())))
    }
}

impl FromIterator<(usize, Scalar)> for SparseVec {
    fn from_iter<T: IntoIterator<Item = (usize, Scalar)>>(iter: T) -> Self {
        SparseVec::from_entries(iter)
    }
}

impl<'a> IntoIterator for &'a SparseVec {
    type Item = (&'a usize, &'a Scalar);
    type IntoIter = btree_map::Iter<'a, usize, Scalar>;
    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}

impl fmt::Display for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(i, c)| format!("{}*[{i}]", c.signed_string()))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A linear map given by its action on sparse vectors.
pub trait LinearOperator: Sync {
    fn apply(&self, v: &SparseVec) -> Result<SparseVec>;
}

impl<F> LinearOperator for F
where
    F: Fn(&SparseVec) -> Result<SparseVec> + Sync,
{
    fn apply(&self, v: &SparseVec) -> Result<SparseVec> {
        self(v)
    }
}

/// A sparse matrix stored by columns: `columns[j]` is the image of basis
/// vector `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    columns: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            columns: vec![SparseVec::new(); cols],
        }
    }

    pub fn from_columns(rows: usize, columns: Vec<SparseVec>) -> Self {
        debug_assert!(columns
            .iter()
            .all(|c| c.max_index().map_or(true, |m| m < rows)));
        SparseMatrix { rows, columns }
    }

    pub fn identity(dim: usize, field: FieldSpec) -> Self {
        SparseMatrix {
            rows: dim,
            columns: (0..dim).map(|j| SparseVec::unit(j, field)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn get(&self, row: usize, col: usize) -> Option<&Scalar> {
        self.columns[col].get(row)
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(SparseVec::is_zero)
    }

    /// Nonzero entries as `(row, col, value)`, sorted by row then column.
    pub fn entries(&self) -> Vec<(usize, usize, Scalar)> {
        let mut out = Vec::new();
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                out.push((*r, c, v.clone()));
            }
        }
        out.sort_by_key(|(r, c, _)| (*r, *c));
        out
    }

    pub fn mul_vec(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (j, c) in v {
            out.add_scaled(c, &self.columns[*j]);
        }
        out
    }

    pub fn compose(&self, right: &SparseMatrix) -> SparseMatrix {
        SparseMatrix {
            rows: self.rows,
            columns: right.columns.iter().map(|c| self.mul_vec(c)).collect(),
        }
    }

    pub fn add_scaled(&mut self, coeff: &Scalar, other: &SparseMatrix) {
        for (mine, theirs) in self.columns.iter_mut().zip(&other.columns) {
            mine.add_scaled(coeff, theirs);
        }
    }

    pub fn minus(&self, other: &SparseMatrix) -> SparseMatrix {
        SparseMatrix {
            rows: self.rows,
            columns: self
                .columns
                .iter()
                .zip(&other.columns)
                .map(|(a, b)| a.minus(b))
                .collect(),
        }
    }

    /// Commutator `self * other - other * self`.
    pub fn commutator(&self, other: &SparseMatrix) -> SparseMatrix {
        self.compose(other).minus(&other.compose(self))
    }

    /// All entries laid out as one long vector (column-major).
    pub fn flatten(&self) -> SparseVec {
        let mut out = SparseVec::new();
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                out.add_term(c * self.rows + r, v);
            }
        }
        out
    }
}

impl LinearOperator for SparseMatrix {
    fn apply(&self, v: &SparseVec) -> Result<SparseVec> {
        Ok(self.mul_vec(v))
    }
}

/// A subspace of `field^dim` held in reduced row echelon form: pivots
/// increase with the row index, each pivot coefficient is one, and pivot
/// columns vanish in every other row. The form is unique, so subspaces
/// compare by equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    field: FieldSpec,
    ambient_dim: usize,
    rows: Vec<SparseVec>,
}

impl Subspace {
    pub fn zero(field: FieldSpec, ambient_dim: usize) -> Self {
        Subspace {
            field,
            ambient_dim,
            rows: Vec::new(),
        }
    }

    pub fn full(field: FieldSpec, ambient_dim: usize) -> Self {
        Subspace {
            field,
            ambient_dim,
            rows: (0..ambient_dim).map(|i| SparseVec::unit(i, field)).collect(),
        }
    }

    pub fn span<'a>(
        field: FieldSpec,
        ambient_dim: usize,
        vectors: impl IntoIterator<Item = &'a SparseVec>,
    ) -> Self {
        let mut s = Subspace::zero(field, ambient_dim);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient_dim
    }

    /// The canonical echelon basis.
    pub fn basis(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.leading().unwrap().0).collect()
    }

    fn pivot_row(&self, pivot: usize) -> Option<&SparseVec> {
        self.rows
            .binary_search_by_key(&pivot, |r| r.leading().unwrap().0)
            .ok()
            .map(|k| &self.rows[k])
    }

    /// Remainder of `v` modulo the subspace. Linear in `v`, and zero exactly
    /// when `v` lies in the subspace.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut out = v.clone();
        for row in &self.rows {
            let pivot = row.leading().unwrap().0;
            if let Some(c) = out.get(pivot).cloned() {
                out.add_scaled(&-c, row);
            }
        }
        out
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the spanning set. Returns whether the dimension grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        debug_assert!(v.max_index().map_or(true, |m| m < self.ambient_dim));
        let r = self.reduce(v);
        let Some((pivot, lead)) = r.leading() else {
            return false;
        };
        let r = r.scaled(&lead.inv().unwrap());
        for row in &mut self.rows {
            if let Some(c) = row.get(pivot).cloned() {
                row.add_scaled(&-c, &r);
            }
        }
        let at = self.rows.partition_point(|row| row.leading().unwrap().0 < pivot);
        self.rows.insert(at, r);
        true
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for r in &other.rows {
            s.insert(r);
        }
        s
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        let k = self.rows.len();
        let columns: Vec<SparseVec> = self
            .rows
            .iter()
            .cloned()
            .chain(other.rows.iter().map(SparseVec::neg))
            .collect();
        let mut out = Subspace::zero(self.field, self.ambient_dim);
        for combo in kernel_vectors(self.field, &columns) {
            let mut v = SparseVec::new();
            for (i, c) in &combo {
                if *i < k {
                    v.add_scaled(c, &self.rows[*i]);
                }
            }
            out.insert(&v);
        }
        out
    }

    /// First echelon row whose pivot is `index`, if any.
    pub fn row_with_pivot(&self, index: usize) -> Option<&SparseVec> {
        self.pivot_row(index)
    }
}

/// Semi-echelon elimination that remembers how each reduced vector was
/// combined from the inputs.
struct TrackedEchelon {
    rows: HashMap<usize, (SparseVec, SparseVec)>,
}

impl TrackedEchelon {
    fn new() -> Self {
        TrackedEchelon {
            rows: HashMap::new(),
        }
    }

    /// Reduces `v` (known to equal the combination `combo`). Returns the
    /// reduced vector and its combination.
    fn reduce(&self, mut v: SparseVec, mut combo: SparseVec) -> (SparseVec, SparseVec) {
        while let Some((pivot, c)) = v.leading().map(|(i, c)| (i, c.clone())) {
            match self.rows.get(&pivot) {
                Some((row, row_combo)) => {
                    let c = -c;
                    v.add_scaled(&c, row);
                    combo.add_scaled(&c, row_combo);
                }
                None => break,
            }
        }
        (v, combo)
    }

    /// Inserts a reduced nonzero vector.
    fn push(&mut self, v: SparseVec, combo: SparseVec) {
        let (pivot, lead) = v.leading().map(|(i, c)| (i, c.clone())).unwrap();
        let inv = lead.inv().unwrap();
        self.rows.insert(pivot, (v.scaled(&inv), combo.scaled(&inv)));
    }
}

/// A basis of the kernel of the map whose `j`-th column is `columns[j]`,
/// as combination vectors over column indices.
pub fn kernel_vectors(field: FieldSpec, columns: &[SparseVec]) -> Vec<SparseVec> {
    let mut echelon = TrackedEchelon::new();
    let mut kernel = Vec::new();
    for (j, col) in columns.iter().enumerate() {
        let (v, combo) = echelon.reduce(col.clone(), SparseVec::unit(j, field));
        if v.is_zero() {
            kernel.push(combo);
        } else {
            echelon.push(v, combo);
        }
    }
    kernel
}

/// Kernel of the map with the given columns, as a subspace of
/// `field^columns.len()`.
pub fn kernel(field: FieldSpec, columns: &[SparseVec]) -> Subspace {
    Subspace::span(field, columns.len(), &kernel_vectors(field, columns))
}

/// Rank of a family of vectors.
pub fn rank(field: FieldSpec, vectors: &[SparseVec]) -> usize {
    vectors.len() - kernel_vectors(field, vectors).len()
}

/// Expresses vectors as combinations of a fixed linearly independent family.
pub struct CoordinateSolver {
    echelon: TrackedEchelon,
    len: usize,
}

impl CoordinateSolver {
    /// Fails if the family is linearly dependent.
    pub fn new(field: FieldSpec, family: &[SparseVec]) -> Result<Self> {
        let mut echelon = TrackedEchelon::new();
        for (j, v) in family.iter().enumerate() {
            let (r, combo) = echelon.reduce(v.clone(), SparseVec::unit(j, field));
            if r.is_zero() {
                return Err(Error::InvalidParameter(format!(
                    "family member {j} depends on the earlier ones"
                )));
            }
            echelon.push(r, combo);
        }
        Ok(CoordinateSolver {
            echelon,
            len: family.len(),
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Coordinates of `v` in the family, or `None` if `v` is outside its span.
    pub fn solve(&self, v: &SparseVec) -> Option<SparseVec> {
        let (rest, combo) = self.echelon.reduce(v.clone(), SparseVec::new());
        rest.is_zero().then(|| combo.neg())
    }
}

/// The smallest subspace containing `seed` and stable under every operator.
pub fn span_closure(seed: &Subspace, operators: &[&dyn LinearOperator]) -> Result<Subspace> {
    let mut closure = seed.clone();
    let mut frontier: Vec<SparseVec> = seed.basis().to_vec();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for v in &frontier {
            for op in operators {
                let image = op.apply(v)?;
                let r = closure.reduce(&image);
                if !r.is_zero() {
                    closure.insert(&r);
                    next.push(r);
                }
            }
        }
        frontier = next;
    }
    Ok(closure)
}

/// The largest subspace `V` of `start` with `op(V) ⊆ V` for every operator,
/// found by iterating `V ← {v ∈ V : op(v) ∈ V for all op}`.
pub fn greatest_invariant_subspace(
    start: &Subspace,
    operators: &[&dyn LinearOperator],
) -> Result<Subspace> {
    let field = start.field();
    let ambient = start.ambient_dim();
    let mut current = start.clone();
    loop {
        let basis = current.basis().to_vec();
        if basis.is_empty() {
            return Ok(current);
        }
        // Column i stacks the residues of op_k(b_i) modulo V for all k.
        let mut columns = vec![SparseVec::new(); basis.len()];
        for (k, op) in operators.iter().enumerate() {
            for (i, b) in basis.iter().enumerate() {
                let residue = current.reduce(&op.apply(b)?);
                for (idx, c) in &residue {
                    columns[i].add_term(k * ambient + idx, c);
                }
            }
        }
        let mut next = Subspace::zero(field, ambient);
        for combo in kernel_vectors(field, &columns) {
            let mut v = SparseVec::new();
            for (i, c) in &combo {
                v.add_scaled(c, &basis[*i]);
            }
            next.insert(&v);
        }
        if next.dim() == current.dim() {
            return Ok(next);
        }
        current = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn vec_of(field: FieldSpec, coeffs: &[i64]) -> SparseVec {
        coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| (i, field.from_i64(*c)))
            .collect()
    }

    #[test]
    fn echelon_form_is_canonical() {
        let f3 = f(3);
        let a = Subspace::span(f3, 3, &[vec_of(f3, &[1, 1, 0]), vec_of(f3, &[0, 1, 1])]);
        let b = Subspace::span(f3, 3, &[vec_of(f3, &[1, 2, 1]), vec_of(f3, &[2, 0, 1])]);
        assert_eq!(a, b);
        assert_eq!(a.pivots(), vec![0, 1]);
        assert!(a.contains(&vec_of(f3, &[1, 0, 2])));
        assert!(!a.contains(&vec_of(f3, &[0, 0, 1])));
    }

    #[test]
    fn kernel_and_rank() {
        let q = FieldSpec::rational();
        let cols = [vec_of(q, &[1, 2]), vec_of(q, &[2, 4]), vec_of(q, &[0, 1])];
        let k = kernel(q, &cols);
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&vec_of(q, &[2, -1, 0])));
        assert_eq!(rank(q, &cols), 2);
    }

    #[test]
    fn coordinates() {
        let f5 = f(5);
        let fam = [vec_of(f5, &[1, 1, 0]), vec_of(f5, &[0, 1, 1])];
        let solver = CoordinateSolver::new(f5, &fam).unwrap();
        let target = vec_of(f5, &[2, 5, 3]);
        let c = solver.solve(&target).unwrap();
        assert_eq!(c, vec_of(f5, &[2, 3]));
        assert!(solver.solve(&vec_of(f5, &[1, 0, 0])).is_none());
        assert!(CoordinateSolver::new(f5, &[fam[0].clone(), fam[0].scaled(&f5.from_i64(2))]).is_err());
    }

    #[test]
    fn intersection_of_planes() {
        let f3 = f(3);
        let a = Subspace::span(f3, 3, &[vec_of(f3, &[1, 0, 0]), vec_of(f3, &[0, 1, 0])]);
        let b = Subspace::span(f3, 3, &[vec_of(f3, &[0, 1, 0]), vec_of(f3, &[0, 0, 1])]);
        let i = a.intersection(&b);
        assert_eq!(i, Subspace::span(f3, 3, &[vec_of(f3, &[0, 1, 0])]));
    }

    fn derivative_f3() -> SparseMatrix {
        // d/dx on 1, x, x^2 over F_3
        let f3 = f(3);
        SparseMatrix::from_columns(
            3,
            vec![
                SparseVec::new(),
                SparseVec::unit(0, f3),
                SparseVec::unit(1, f3).scaled(&f3.from_i64(2)),
            ],
        )
    }

    #[test]
    fn closure_under_derivative() {
        let f3 = f(3);
        let d = derivative_f3();
        let seed = Subspace::span(f3, 3, &[SparseVec::unit(2, f3)]);
        assert!(span_closure(&seed, &[&d]).unwrap().is_full());
        let shift = SparseMatrix::from_columns(
            3,
            vec![SparseVec::unit(1, f3), SparseVec::unit(2, f3), SparseVec::new()],
        );
        let one = Subspace::span(f3, 3, &[SparseVec::unit(0, f3)]);
        assert!(span_closure(&one, &[&shift]).unwrap().is_full());
        let full = Subspace::full(f3, 3);
        assert_eq!(span_closure(&full, &[&d]).unwrap(), full);
    }

    #[test]
    fn invariant_subspace_of_derivative() {
        let f3 = f(3);
        let d = derivative_f3();
        let start = Subspace::full(f3, 3);
        assert!(greatest_invariant_subspace(&start, &[&d]).unwrap().is_full());
        let top = Subspace::span(f3, 3, &[SparseVec::unit(1, f3), SparseVec::unit(2, f3)]);
        assert!(greatest_invariant_subspace(&top, &[&d]).unwrap().is_zero());
        let low = Subspace::span(f3, 3, &[SparseVec::unit(0, f3), SparseVec::unit(1, f3)]);
        assert_eq!(greatest_invariant_subspace(&low, &[&d]).unwrap(), low);
        let zero = Subspace::zero(f3, 3);
        assert!(greatest_invariant_subspace(&zero, &[&d]).unwrap().is_zero());
    }
}
