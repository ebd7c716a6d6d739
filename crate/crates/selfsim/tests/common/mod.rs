//! Independent dense oracles: exact Gaussian elimination over F_p or Q,
//! naive level actions, and brute-force closures.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use selfsim::lie::LieElement;
use selfsim::structure::SelfSimilarStructure;
use selfsim::truncalg::Monomial;
use selfsim::{FieldSpec, Scalar, SparseVec, Subspace};

/// Arithmetic context: `Some(p)` for F_p, `None` for Q.
#[derive(Clone, Copy, Debug)]
pub struct Ctx {
    pub p: Option<u64>,
}

pub type Elt = BigRational;

impl Ctx {
    pub fn of(field: FieldSpec) -> Self {
        match field.characteristic() {
            0 => Ctx { p: None },
            p => Ctx { p: Some(p as u64) },
        }
    }

    pub fn norm(&self, a: Elt) -> Elt {
        match self.p {
            None => a,
            Some(p) => {
                let p = BigInt::from(p);
                let num = ((a.numer() % &p) + &p) % &p;
                let den = ((a.denom() % &p) + &p) % &p;
                let inv = den.modpow(&(&p - 2), &p);
                BigRational::from_integer((num * inv) % &p)
            }
        }
    }

    pub fn int(&self, n: i64) -> Elt {
        self.norm(BigRational::from_integer(n.into()))
    }

    pub fn add(&self, a: &Elt, b: &Elt) -> Elt {
        self.norm(a + b)
    }

    pub fn sub(&self, a: &Elt, b: &Elt) -> Elt {
        self.norm(a - b)
    }

    pub fn mul(&self, a: &Elt, b: &Elt) -> Elt {
        self.norm(a * b)
    }

    pub fn inv(&self, a: &Elt) -> Elt {
        self.norm(a.recip())
    }

    pub fn scalar(&self, s: &Scalar) -> Elt {
        match s {
            Scalar::Mod { value, .. } => self.int(*value as i64),
            Scalar::Rational(r) => r.clone(),
        }
    }

    pub fn dense(&self, v: &SparseVec, dim: usize) -> Vec<Elt> {
        let mut out = vec![Elt::zero(); dim];
        for (i, c) in v {
            out[*i] = self.scalar(c);
        }
        out
    }

    /// Row echelon form of the given rows, zero rows dropped.
    pub fn echelon(&self, rows: &[Vec<Elt>]) -> Vec<Vec<Elt>> {
        let mut rows: Vec<Vec<Elt>> = rows.to_vec();
        let width = rows.first().map_or(0, Vec::len);
        let mut done = 0;
        for col in 0..width {
            let Some(pivot) = (done..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(done, pivot);
            let inv = self.inv(&rows[done][col]);
            rows[done] = rows[done].iter().map(|x| self.mul(x, &inv)).collect();
            for r in 0..rows.len() {
                if r != done && !rows[r][col].is_zero() {
                    let f = rows[r][col].clone();
                    rows[r] = rows[r]
                        .iter()
                        .zip(&rows[done])
                        .map(|(a, b)| self.sub(a, &self.mul(&f, b)))
                        .collect();
                }
            }
            done += 1;
        }
        rows.truncate(done);
        rows
    }

    pub fn rank(&self, rows: &[Vec<Elt>]) -> usize {
        self.echelon(rows).len()
    }

    /// Null space of the matrix whose columns are given.
    pub fn kernel(&self, columns: &[Vec<Elt>]) -> Vec<Vec<Elt>> {
        let ncols = columns.len();
        let nrows = columns.first().map_or(0, Vec::len);
        let rows: Vec<Vec<Elt>> = (0..nrows).map(|r| columns.iter().map(|c| c[r].clone()).collect()).collect();
        let ech = self.echelon(&rows);
        let pivots: Vec<usize> = ech.iter().map(|r| r.iter().position(|x| !x.is_zero()).unwrap()).collect();
        let mut out = Vec::new();
        for free in (0..ncols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Elt::zero(); ncols];
            v[free] = Elt::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = self.norm(-ech[r][free].clone());
            }
            out.push(v);
        }
        out
    }

    pub fn apply(&self, columns: &[Vec<Elt>], v: &[Elt]) -> Vec<Elt> {
        let mut out = vec![Elt::zero(); columns.first().map_or(0, Vec::len)];
        for (c, x) in columns.iter().zip(v) {
            if x.is_zero() {
                continue;
            }
            for (o, y) in out.iter_mut().zip(c) {
                *o = self.add(o, &self.mul(x, y));
            }
        }
        out
    }

    /// Dimension of the smallest subspace containing `seed` and stable
    /// under every operator, by rank growth until it stops.
    pub fn closure_dim(&self, seed: &[Vec<Elt>], operators: &[Vec<Vec<Elt>>]) -> usize {
        let mut basis = self.echelon(seed);
        loop {
            let mut rows = basis.clone();
            for op in operators {
                for b in &basis {
                    rows.push(self.apply(op, b));
                }
            }
            let next = self.echelon(&rows);
            if next.len() == basis.len() {
                return basis.len();
            }
            basis = next;
        }
    }

    /// Whether every oracle vector lies in the library subspace.
    pub fn inside(&self, vectors: &[Vec<Elt>], space: &Subspace) -> bool {
        let dense: Vec<Vec<Elt>> = space.basis().iter().map(|b| self.dense(b, space.ambient_dim())).collect();
        let r = self.rank(&dense);
        vectors.iter().all(|v| {
            let mut rows = dense.clone();
            rows.push(v.clone());
            self.rank(&rows) == r
        })
    }

    pub fn to_sparse(&self, field: FieldSpec, v: &[Elt]) -> SparseVec {
        SparseVec::from_entries(v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| {
            let s = match self.p {
                Some(_) => field.from_i64(x.to_integer().try_into().unwrap()),
                None => field
                    .from_ratio(x.numer().try_into().unwrap(), x.denom().try_into().unwrap())
                    .unwrap(),
            };
            (i, s)
        }))
    }
}

/// Level matrices of every basis element on `X^{⊗m}` for a one-variable
/// alphabet, built from the recursive definition
/// `a·(x^i ⊗ t) = Σ_z x^(z+i) ⊗ (a_z·t) + δ_a(x^i) ⊗ t`
/// with dense arithmetic only. Column `j` is the image of tuple `j`, first
/// factor most significant.
pub fn naive_level_matrices(psi: &SelfSimilarStructure, level: usize) -> Vec<Vec<Vec<Elt>>> {
    let w = psi.wreath();
    let x = w.alphabet();
    assert_eq!(x.nvars(), 1, "oracle handles one variable");
    let field = psi.algebra().field();
    let ctx = Ctx::of(field);
    let q = x.dim();
    let slot = |k: u32| x.monomial_index(&Monomial(vec![k]));
    for k in 0..q as u32 {
        assert_eq!(slot(k), Some(k as usize));
    }
    let n = psi.algebra().dim();
    // Level 0 is the ground field, acted on by zero.
    let mut current: Vec<Vec<Vec<Elt>>> = vec![vec![vec![Elt::zero()]]; n];
    for m in 1..=level {
        let inner_dim = q.pow(m as u32 - 1);
        let dim = inner_dim * q;
        let combine = |a: &LieElement| -> Vec<Vec<Elt>> {
            let mut out = vec![vec![Elt::zero(); inner_dim]; inner_dim];
            for (b, c) in a.coeffs() {
                let c = ctx.scalar(c);
                for (col, src) in out.iter_mut().zip(&current[*b]) {
                    for (o, s) in col.iter_mut().zip(src) {
                        *o = ctx.add(o, &ctx.mul(&c, s));
                    }
                }
            }
            out
        };
        let mut next = Vec::with_capacity(n);
        for b in 0..n {
            let image = &psi.images()[b];
            let states: Vec<(u32, Vec<Vec<Elt>>)> = image.states().map(|(z, a)| (z.0[0], combine(a))).collect();
            let shift = image.project_der().image(0);
            let mut cols = vec![vec![Elt::zero(); dim]; dim];
            for i in 0..q {
                for rest in 0..inner_dim {
                    let col = &mut cols[i * inner_dim + rest];
                    for (z, op) in &states {
                        let target = *z as usize + i;
                        if target >= q {
                            continue;
                        }
                        for (r, v) in op[rest].iter().enumerate() {
                            let k = target * inner_dim + r;
                            col[k] = ctx.add(&col[k], v);
                        }
                    }
                    if i > 0 {
                        for (mono, c) in shift.terms() {
                            let target = mono.0[0] as usize + i - 1;
                            if target >= q {
                                continue;
                            }
                            let k = target * inner_dim + rest;
                            let v = ctx.mul(&ctx.int(i as i64), &ctx.scalar(c));
                            col[k] = ctx.add(&col[k], &v);
                        }
                    }
                }
            }
            next.push(cols);
        }
        current = next;
    }
    current
}

pub fn prime(p: u32) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

/// All subspaces of F_2^d as bitmask sets, d ≤ 4.
pub fn f2_subspaces(d: usize) -> Vec<Vec<u32>> {
    let mut found: Vec<Vec<u32>> = Vec::new();
    for gens in 0u64..(1 << (1 << d)) {
        let mut span = vec![0u32];
        for v in 0..(1u32 << d) {
            if gens >> v & 1 == 1 && !span.contains(&v) {
                let extra: Vec<u32> = span.iter().map(|s| s ^ v).collect();
                span.extend(extra);
            }
        }
        span.sort();
        if !found.contains(&span) {
            found.push(span);
        }
    }
    found
}

pub fn mask(v: &SparseVec) -> u32 {
    v.indices().fold(0, |m, i| m | 1 << i)
}

pub fn mask_set(s: &Subspace) -> Vec<u32> {
    let mut span = vec![0u32];
    for b in s.basis() {
        let v = mask(b);
        let extra: Vec<u32> = span.iter().map(|x| x ^ v).collect();
        span.extend(extra);
    }
    span.sort();
    span
}

