//! Representation oracle: U_q acting on tensor powers of the vector
//! representation.
//!
//! On the vector representation `V = span(e_1, …, e_{n+1})`, `E_i` is the
//! matrix unit `(i, i+1)`, `F_i` is `(i+1, i)` and `K_μ` acts on `e_j` by
//! `q^{(μ, ε_j)}`.  For weights outside the root lattice that pairing is a
//! multiple of `1/(n+1)`, so the matrices live over the field with
//! `v = q^{1/(2(n+1))}` adjoined; scalars enter through the embedding
//! `u ↦ v^{n+1}` (the symbol `u` is reused for `v`).  Tensor powers use the
//! coproduct `Δ(E_i) = E_i⊗1 + K_i⊗E_i`, `Δ(F_i) = F_i⊗K_i^{-1} + 1⊗F_i`,
//! `Δ(K_μ) = K_μ⊗K_μ`.
//!
//! The oracle is one-sided: a nonzero matrix refutes an identity, a zero
//! matrix does not prove it.

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::coeffield::{FieldElem, U};
use crate::expr::{Evaluator, Expr};
use crate::rootdata::Weight;
use crate::uqcore::{Algebra, NormalElement};

/// Default cap on the dimension `(n+1)^N`.
pub const DEFAULT_MAX_DIM: usize = 4096;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RepError {
    #[error("tensor power {power} of the {base}-dimensional representation exceeds the dimension cap {cap}")]
    TooLarge { base: usize, power: u32, cap: usize },
    #[error("tensor power must be at least 1")]
    ZeroPower,
}

/// A sparse square matrix over the (inflated) coefficient field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepMatrix {
    dim: usize,
    /// Row-major, each row sorted by column, no zero entries.
    rows: Vec<Vec<(u32, FieldElem)>>,
}

impl RepMatrix {
    pub fn zero(dim: usize) -> RepMatrix {
        RepMatrix { dim, rows: vec![Vec::new(); dim] }
    }

    pub fn diagonal(entries: Vec<FieldElem>) -> RepMatrix {
        let dim = entries.len();
        let rows = entries
            .into_iter()
            .enumerate()
            .map(|(i, c)| if c.is_zero() { Vec::new() } else { vec![(i as u32, c)] })
            .collect();
        RepMatrix { dim, rows }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn entry(&self, i: usize, j: usize) -> FieldElem {
        self.rows[i]
            .iter()
            .find(|(c, _)| *c as usize == j)
            .map(|(_, x)| x.clone())
            .unwrap_or_default()
    }

    /// Number of nonzero entries.
    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    fn from_row_maps(dim: usize, maps: Vec<FxHashMap<u32, FieldElem>>) -> RepMatrix {
        let rows = maps
            .into_iter()
            .map(|m| {
                let mut r: Vec<(u32, FieldElem)> = m.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                r.sort_by_key(|(c, _)| *c);
                r
            })
            .collect();
        RepMatrix { dim, rows }
    }

    pub fn add(&self, o: &RepMatrix) -> RepMatrix {
        let maps = self
            .rows
            .iter()
            .zip(&o.rows)
            .map(|(a, b)| {
                let mut m: FxHashMap<u32, FieldElem> = a.iter().cloned().collect();
                for (j, c) in b {
                    let e = m.entry(*j).or_default();
                    *e = e.add(c);
                }
                m
            })
            .collect();
        RepMatrix::from_row_maps(self.dim, maps)
    }

    pub fn scale(&self, c: &FieldElem) -> RepMatrix {
        if c.is_zero() {
            return RepMatrix::zero(self.dim);
        }
        RepMatrix {
            dim: self.dim,
            rows: self.rows.iter().map(|r| r.iter().map(|(j, x)| (*j, x.mul(c))).collect()).collect(),
        }
    }

    pub fn mul(&self, o: &RepMatrix) -> RepMatrix {
        let maps = self
            .rows
            .iter()
            .map(|row| {
                let mut m: FxHashMap<u32, FieldElem> = FxHashMap::default();
                for (k, a) in row {
                    for (j, b) in &o.rows[*k as usize] {
                        let e = m.entry(*j).or_default();
                        *e = e.add(&a.mul(b));
                    }
                }
                m
            })
            .collect();
        RepMatrix::from_row_maps(self.dim, maps)
    }

    /// Kronecker product `self ⊗ o`.
    pub fn kron(&self, o: &RepMatrix) -> RepMatrix {
        let dim = self.dim * o.dim;
        let mut rows = vec![Vec::new(); dim];
        for (i, ra) in self.rows.iter().enumerate() {
            for (k, rb) in o.rows.iter().enumerate() {
                let row = &mut rows[i * o.dim + k];
                for (j, a) in ra {
                    for (l, b) in rb {
                        row.push(((*j as usize * o.dim + *l as usize) as u32, a.mul(b)));
                    }
                }
            }
        }
        RepMatrix { dim, rows }
    }

    pub fn identity(dim: usize) -> RepMatrix {
        RepMatrix::diagonal(vec![FieldElem::one(); dim])
    }
}

/// U_q acting on `V^{⊗N}`.
pub struct RepAlgebra {
    n: usize,
    power: u32,
    dim: usize,
    e: Vec<RepMatrix>,
    f: Vec<RepMatrix>,
}

impl RepAlgebra {
    pub fn new(n: usize, power: u32) -> Result<RepAlgebra, RepError> {
        RepAlgebra::with_cap(n, power, DEFAULT_MAX_DIM)
    }

    pub fn with_cap(n: usize, power: u32, cap: usize) -> Result<RepAlgebra, RepError> {
        if power == 0 {
            return Err(RepError::ZeroPower);
        }
        let base = n + 1;
        let dim = base.checked_pow(power).filter(|d| *d <= cap).ok_or(RepError::TooLarge { base, power, cap })?;
        let mut alg = RepAlgebra {
            n,
            power,
            dim,
            e: Vec::new(),
            f: Vec::new(),
        };
        for i in 1..=n {
            let (e, f) = alg.lift_generators(i);
            alg.e.push(e);
            alg.f.push(f);
        }
        Ok(alg)
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `(n+1)·(μ, ε_j)` for the j-th basis vector (0-based) of V.
    fn scaled_pairing(&self, mu: &Weight, j: usize) -> i32 {
        let n1 = (self.n + 1) as i32;
        mu.coords()
            .iter()
            .enumerate()
            .map(|(a, m)| {
                let a1 = a + 1;
                let ind = if j < a1 { 1 } else { 0 };
                m * (n1 * ind - a1 as i32)
            })
            .sum()
    }

    fn base_k(&self, mu: &Weight) -> RepMatrix {
        RepMatrix::diagonal(
            (0..=self.n)
                .map(|j| FieldElem::monomial(U, (2 * self.scaled_pairing(mu, j)) as i16, 1))
                .collect(),
        )
    }

    fn base_unit(&self, i: usize, j: usize) -> RepMatrix {
        let mut m = RepMatrix::zero(self.n + 1);
        m.rows[i].push((j as u32, FieldElem::one()));
        m
    }

    fn lift_generators(&self, i: usize) -> (RepMatrix, RepMatrix) {
        let base = self.n + 1;
        let e1 = self.base_unit(i - 1, i);
        let f1 = self.base_unit(i, i - 1);
        let ai = crate::rootdata::alpha(self.n, i);
        let k1 = self.base_k(&ai);
        let ki1 = self.base_k(&ai.neg());
        let id1 = RepMatrix::identity(base);
        let mut e_total = RepMatrix::zero(self.dim);
        let mut f_total = RepMatrix::zero(self.dim);
        for p in 0..self.power {
            let mut e_t = RepMatrix::identity(1);
            let mut f_t = RepMatrix::identity(1);
            for s in 0..self.power {
                let (ea, fa) = match s.cmp(&p) {
                    std::cmp::Ordering::Less => (&k1, &id1),
                    std::cmp::Ordering::Equal => (&e1, &f1),
                    std::cmp::Ordering::Greater => (&id1, &ki1),
                };
                e_t = e_t.kron(ea);
                f_t = f_t.kron(fa);
            }
            e_total = e_total.add(&e_t);
            f_total = f_total.add(&f_t);
        }
        (e_total, f_total)
    }

    fn embed(&self, c: &FieldElem) -> FieldElem {
        c.inflate(U, (self.n + 1) as i16)
    }

    /// Lift a normal form.
    pub fn lift_normal(&self, x: &NormalElement) -> RepMatrix {
        let e = crate::braidaction::normal_to_expr(x);
        Evaluator::new(self).eval(&e).expect("normal forms contain no coideal leaves")
    }

    /// Lift an expression in E, F, K.
    pub fn lift(&self, e: &Expr) -> Result<RepMatrix, crate::expr::EvalError> {
        Evaluator::new(self).eval(e)
    }
}

impl Algebra for RepAlgebra {
    type Elem = RepMatrix;

    fn rank(&self) -> usize {
        self.n
    }

    fn scalar(&self, c: &FieldElem) -> RepMatrix {
        RepMatrix::identity(self.dim).scale(&self.embed(c))
    }

    fn gen_e(&self, i: usize) -> RepMatrix {
        self.e[i - 1].clone()
    }

    fn gen_f(&self, i: usize) -> RepMatrix {
        self.f[i - 1].clone()
    }

    fn gen_k(&self, mu: &Weight) -> RepMatrix {
        let mut k = RepMatrix::identity(1);
        let b = self.base_k(mu);
        for _ in 0..self.power {
            k = k.kron(&b);
        }
        k
    }

    fn add(&self, a: &RepMatrix, b: &RepMatrix) -> RepMatrix {
        a.add(b)
    }

    fn scale(&self, a: &RepMatrix, c: &FieldElem) -> RepMatrix {
        a.scale(&self.embed(c))
    }

    fn mul(&self, a: &RepMatrix, b: &RepMatrix) -> RepMatrix {
        a.mul(b)
    }

    fn is_zero(&self, a: &RepMatrix) -> bool {
        a.is_zero()
    }
}

/// True iff the lift of `x` to `V^{⊗N}` vanishes.
pub fn cross_check(x: &NormalElement, power: u32) -> Result<bool, RepError> {
    let alg = RepAlgebra::new(x.rank(), power)?;
    Ok(alg.lift_normal(x).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{alpha, varpi};

    #[test]
    fn ef_relation_in_vector_rep() {
        let a = RepAlgebra::new(2, 1).unwrap();
        let lhs = a.sub(&a.mul(&a.gen_e(1), &a.gen_f(1)), &a.mul(&a.gen_f(1), &a.gen_e(1)));
        let k = a.sub(&a.gen_k(&alpha(2, 1)), &a.gen_k(&alpha(2, 1).neg()));
        let rhs = a.scale(&k, &FieldElem::q_minus_qinv().inv().unwrap());
        assert!(a.sub(&lhs, &rhs).is_zero());
        assert_eq!(a.gen_k(&Weight::zero(2)), RepMatrix::identity(3));
    }

    #[test]
    fn tensor_square_respects_relations() {
        let n = 3;
        let a = RepAlgebra::new(n, 2).unwrap();
        for i in 1..=n {
            for j in 1..=n {
                let c = a.sub(&a.mul(&a.gen_e(i), &a.gen_f(j)), &a.mul(&a.gen_f(j), &a.gen_e(i)));
                let expect = if i == j {
                    let k = a.sub(&a.gen_k(&alpha(n, i)), &a.gen_k(&alpha(n, i).neg()));
                    a.scale(&k, &FieldElem::q_minus_qinv().inv().unwrap())
                } else {
                    RepMatrix::zero(a.dim())
                };
                assert!(a.sub(&c, &expect).is_zero(), "[E{i},F{j}]");
            }
            let kw = a.gen_k(&varpi(n, 2));
            let lhs = a.mul(&kw, &a.gen_e(i));
            let rhs = a.scale(&a.mul(&a.gen_e(i), &kw), &FieldElem::q_pow(varpi(n, 2).pair_simple(i)));
            assert!(a.sub(&lhs, &rhs).is_zero());
        }
        assert!(!cross_check(&NormalElement::gen_e(n, 1), 1).unwrap());
        assert!(cross_check(&NormalElement::zero(n), 2).unwrap());
    }
}
