//! The quantum symmetric pair layer for the AIII/AIV Satake diagrams.
//!
//! Coideal generators are kept symbolic: an expression may contain `B[j]`
//! leaves, which are resolved against a [`Params`] only at evaluation
//! time.  Everything the braid-group maps act on — the `B_j`, the
//! generators of `M_X`, and the torus elements `K_μ` with `μ` fixed by
//! `−w_X∘τ` — is therefore an ordinary [`Expr`].
//!
//! Parameters: `c_i = t_i^2` with one symbol per τ-orbit outside
//! `{r, τ(r)}` and two independent symbols `t_r`, `t_{τ(r)}` on that orbit.
//! The symmetric family identifies `t_{τ(r)}` with `t_r`; the rescaled
//! family `c'_i = c_i η_i η_{τ(i)} ζ_i` carries the formal symbols used by
//! the reparametrization maps.

use std::sync::Arc;

use thiserror::Error;

use crate::coeffield::{eta_sym, t_sym, FieldElem, ZETA};
use crate::expr::{Atom, EvalError, Evaluator, Expr};
use crate::rootdata::{alpha, cartan_unchecked, SatakeDatum, Weight};
use crate::uqcore::Algebra;

/// Errors raised while building coideal elements.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum QspError {
    #[error("node {0} out of range for rank {1}")]
    IndexRange(usize, usize),
    #[error("node {0} lies in X; {1} is only defined for nodes outside X")]
    InX(usize, &'static str),
    #[error("{0} needs r ≥ 2 (it refers to B_(r-1))")]
    NeedsPredecessor(&'static str),
    #[error("the square root of c_{0} is not available in the {1} parameter family")]
    NoSquareRoot(usize, &'static str),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Which parameter family a [`Params`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Independent `c_r`, `c_{τ(r)}`.
    Generic,
    /// `c_r = c_{τ(r)}`.
    Symmetric,
    /// `c'_i = c_i η_i η_{τ(i)} ζ_i`, derived from a generic family.
    Rescaled,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Generic => "generic",
            Family::Symmetric => "symmetric",
            Family::Rescaled => "rescaled",
        }
    }
}

/// A parameter set `c = (c_i)` together with the square roots the
/// automorphism formulas need.
#[derive(Debug, Clone)]
pub struct Params {
    pub datum: SatakeDatum,
    pub family: Family,
    c: Vec<FieldElem>,
    root_c: Vec<Option<FieldElem>>,
    big_c: FieldElem,
    generators: Arc<Vec<Option<Expr>>>,
}

impl Params {
    /// Independent symbols on the orbit `{r, τ(r)}`.
    pub fn generic(d: SatakeDatum) -> Params {
        Params::from_roots(d, Family::Generic, |i| {
            if i == d.r || i == d.tr() {
                i
            } else {
                i.min(d.tau(i))
            }
        })
    }

    /// `c_{τ(r)} = c_r`, as required by the anti-involution φ.
    pub fn symmetric(d: SatakeDatum) -> Params {
        Params::from_roots(d, Family::Symmetric, |i| i.min(d.tau(i)))
    }

    fn from_roots(d: SatakeDatum, family: Family, sym_of: impl Fn(usize) -> usize) -> Params {
        let n = d.n;
        let mut c = vec![FieldElem::zero(); n + 1];
        let mut root_c = vec![None; n + 1];
        for i in d.non_x_nodes() {
            let t = FieldElem::sym(t_sym(sym_of(i)));
            c[i] = t.mul(&t);
            root_c[i] = Some(t);
        }
        let tr = root_c[d.r].clone().unwrap();
        let ttr = root_c[d.tr()].clone().unwrap();
        let big_c = FieldElem::u().mul(&tr).mul(&ttr).inv().expect("nonzero");
        Params::finish(d, family, c, root_c, big_c)
    }

    fn finish(d: SatakeDatum, family: Family, c: Vec<FieldElem>, root_c: Vec<Option<FieldElem>>, big_c: FieldElem) -> Params {
        let mut p = Params {
            datum: d,
            family,
            c,
            root_c,
            big_c,
            generators: Arc::new(Vec::new()),
        };
        let gens: Vec<Option<Expr>> = (0..=d.n).map(|j| if j == 0 { None } else { Some(p.coideal_generator(j)) }).collect();
        p.generators = Arc::new(gens);
        p
    }

    /// The family `c'_i = c_i η_i η_{τ(i)} ζ_i` with `ζ_r = zeta^{n+1}`,
    /// `ζ_{τ(r)} = ζ_r^{-1}` and `ζ_i = 1` otherwise.  Square roots of the
    /// individual `c'_i` are not available; `C' = C η_r^{-1} η_{τ(r)}^{-1}`.
    pub fn rescaled(&self) -> Params {
        let d = self.datum;
        let mut c = vec![FieldElem::zero(); d.n + 1];
        for i in d.non_x_nodes() {
            c[i] = self.c[i].mul(&eta(i)).mul(&eta(d.tau(i))).mul(&zeta_of(&d, i));
        }
        let big_c = self.big_c.mul(&eta(d.r).inv().unwrap()).mul(&eta(d.tr()).inv().unwrap());
        Params::finish(d, Family::Rescaled, c, vec![None; d.n + 1], big_c)
    }

    pub fn n(&self) -> usize {
        self.datum.n
    }

    /// `c_i` (zero on X).
    pub fn c(&self, i: usize) -> FieldElem {
        self.c[i].clone()
    }

    /// `(q c_i)^{-1/2} = u^{-1} t_i^{-1}`.
    pub fn qc_inv_sqrt(&self, i: usize) -> Result<FieldElem, QspError> {
        let t = self.root_c[i].as_ref().ok_or(QspError::NoSquareRoot(i, self.family.name()))?;
        Ok(FieldElem::u().mul(t).inv().expect("nonzero"))
    }

    /// `C = (q c_r c_{τ(r)})^{-1/2}`.
    pub fn big_c(&self) -> FieldElem {
        self.big_c.clone()
    }

    // -----------------------------------------------------------------
    // U_q-side building blocks (expressions in E, F, K)
    // -----------------------------------------------------------------

    fn check_node(&self, i: usize) -> Result<(), QspError> {
        if (1..=self.n()).contains(&i) {
            Ok(())
        } else {
            Err(QspError::IndexRange(i, self.n()))
        }
    }

    fn check_non_x(&self, i: usize, what: &'static str) -> Result<(), QspError> {
        self.check_node(i)?;
        if self.datum.in_x(i) {
            Err(QspError::InX(i, what))
        } else {
            Ok(())
        }
    }

    /// The coideal generator `B_j` as an expression in E, F, K.
    fn coideal_generator(&self, j: usize) -> Expr {
        let d = self.datum;
        let n = d.n;
        if d.in_x(j) {
            return Expr::f(j);
        }
        let kinv = Expr::k(alpha(n, j).neg());
        let qi = FieldElem::q_pow(-1);
        let e_part = if j == d.r {
            Expr::qc(&ex(&d, true), &Expr::e(d.tr()), qi)
        } else if j == d.tr() {
            Expr::qc(&ex(&d, false), &Expr::e(d.r), qi)
        } else {
            Expr::e(d.tau(j))
        };
        Expr::f(j).sub(&Expr::prod(vec![Expr::scalar(self.c(j)), e_part, kinv]))
    }

    /// `B_j` resolved into E, F, K (for `j ∈ X` this is `F_j`).
    pub fn generator_expr(&self, j: usize) -> Result<Expr, QspError> {
        self.check_node(j)?;
        Ok(self.generators[j].clone().unwrap())
    }

    /// Resolver for `B[j]` leaves, for use with [`Evaluator::with_b`].
    pub fn resolver(&self) -> impl Fn(usize) -> Option<Expr> + Sync + '_ {
        move |j| self.generators.get(j).cloned().flatten()
    }

    /// Evaluate a coideal expression in any algebra.
    pub fn evaluate<A: Algebra>(&self, alg: &A, e: &Expr) -> Result<A::Elem, QspError> {
        let res = self.resolver();
        let mut ev = Evaluator::with_b(alg, &res);
        Ok(ev.eval(e)?)
    }

    // -----------------------------------------------------------------
    // Coideal-side elements (expressions over B, M_X and U_Θ^0)
    // -----------------------------------------------------------------

    /// `B_j` as a coideal leaf (`F_j` for `j ∈ X`).
    pub fn b(&self, j: usize) -> Result<Expr, QspError> {
        self.check_node(j)?;
        Ok(if self.datum.in_x(j) { Expr::f(j) } else { Expr::b(j) })
    }

    /// `L_i = K_i K_{τ(i)}^{-1}`.
    pub fn l(&self, i: usize) -> Result<Expr, QspError> {
        self.check_non_x(i, "L")?;
        Ok(Expr::k(self.datum.l_weight(i)))
    }

    /// `K_X` and its inverse.
    pub fn kx(&self, power: i32) -> Expr {
        Expr::k(self.datum.kx_weight().scale(power))
    }

    /// `K_{ϖ'_i}`.
    pub fn k_varpi_prime(&self, i: usize) -> Expr {
        Expr::k(self.datum.varpi_prime(i))
    }

    pub fn ex(&self, plus: bool) -> Expr {
        ex(&self.datum, plus)
    }

    pub fn fx(&self, plus: bool) -> Expr {
        fx(&self.datum, plus)
    }

    /// `Z_i`.
    pub fn z(&self, i: usize) -> Result<Expr, QspError> {
        self.check_non_x(i, "Z")?;
        let d = self.datum;
        let one_minus = FieldElem::one().sub(&FieldElem::q_pow(-2)).neg();
        Ok(if i == d.r {
            Expr::prod(vec![Expr::scalar(one_minus), self.ex(true), self.l(d.tr())?])
        } else if i == d.tr() {
            Expr::prod(vec![Expr::scalar(one_minus), self.ex(false), self.l(d.r)?])
        } else {
            self.l(d.tau(i))?.neg()
        })
    }

    /// `Γ_i = c_i Z_i − c_{τ(i)} Z_{τ(i)}`.
    pub fn gamma(&self, i: usize) -> Result<Expr, QspError> {
        self.check_non_x(i, "Gamma")?;
        let ti = self.datum.tau(i);
        Ok(self.z(i)?.scaled(&self.c(i)).sub(&self.z(ti)?.scaled(&self.c(ti))))
    }

    fn rm1(&self, what: &'static str) -> Result<usize, QspError> {
        if self.datum.r >= 2 {
            Ok(self.datum.r - 1)
        } else {
            Err(QspError::NeedsPredecessor(what))
        }
    }

    /// `S = [B_{r-1}, [B_r, F_X^+]_q]_q`.
    pub fn s(&self) -> Result<Expr, QspError> {
        let d = self.datum;
        let rm1 = self.rm1("S")?;
        let q = FieldElem::q();
        Ok(Expr::qc(&self.b(rm1)?, &Expr::qc(&self.b(d.r)?, &self.fx(true), q.clone()), q))
    }

    /// `S^τ = [B_{τ(r-1)}, [B_{τ(r)}, F_X^-]_q]_q`.
    pub fn st(&self) -> Result<Expr, QspError> {
        let d = self.datum;
        let rm1 = self.rm1("St")?;
        let q = FieldElem::q();
        Ok(Expr::qc(&self.b(d.tau(rm1))?, &Expr::qc(&self.b(d.tr())?, &self.fx(false), q.clone()), q))
    }

    /// `Δ = q c_{τ(r)} B_{r-1} L_r K_X`.
    pub fn delta(&self) -> Result<Expr, QspError> {
        let d = self.datum;
        let rm1 = self.rm1("Delta")?;
        Ok(Expr::prod(vec![
            Expr::scalar(FieldElem::q().mul(&self.c(d.tr()))),
            self.b(rm1)?,
            self.l(d.r)?,
            self.kx(1),
        ]))
    }

    /// `Δ^τ = q c_r B_{τ(r-1)} L_{τ(r)} K_X`.
    pub fn deltat(&self) -> Result<Expr, QspError> {
        let d = self.datum;
        let rm1 = self.rm1("Deltat")?;
        Ok(Expr::prod(vec![
            Expr::scalar(FieldElem::q().mul(&self.c(d.r))),
            self.b(d.tau(rm1))?,
            self.l(d.tr())?,
            self.kx(1),
        ]))
    }

    /// `Ω^+ = c_r c_{r-1} F_X^+ K_X L_{τ(r)} Z_{r-1}` and
    /// `Ω^- = c_{τ(r)} c_{τ(r-1)} F_X^- K_X L_r Z_{τ(r-1)}`.
    pub fn omega(&self, plus: bool) -> Result<Expr, QspError> {
        let d = self.datum;
        let rm1 = self.rm1("Omega")?;
        let (a, b, l, z) = if plus {
            (d.r, rm1, d.tr(), rm1)
        } else {
            (d.tr(), d.tau(rm1), d.r, d.tau(rm1))
        };
        Ok(Expr::prod(vec![
            Expr::scalar(self.c(a).mul(&self.c(b))),
            self.fx(plus),
            self.kx(1),
            self.l(l)?,
            self.z(z)?,
        ]))
    }

    /// `T = [F_X^-, [B_r, B_{r-1}]_q]_q`.
    pub fn t_big(&self) -> Result<Expr, QspError> {
        let d = self.datum;
        let rm1 = self.rm1("T_big")?;
        let q = FieldElem::q();
        Ok(Expr::qc(&self.fx(false), &Expr::qc(&self.b(d.r)?, &self.b(rm1)?, q.clone()), q))
    }

    /// `Λ = c_r B_{r-1} L_{τ(r)} K_X^{-1}`.
    pub fn lambda(&self) -> Result<Expr, QspError> {
        let d = self.datum;
        let rm1 = self.rm1("Lambda")?;
        Ok(Expr::prod(vec![Expr::scalar(self.c(d.r)), self.b(rm1)?, self.l(d.tr())?, self.kx(-1)]))
    }
}

fn eta(i: usize) -> FieldElem {
    FieldElem::sym(eta_sym(i))
}

/// `ζ_i`: `ζ` at r, `ζ^{-1}` at τ(r), 1 elsewhere.
pub fn zeta_of(d: &SatakeDatum, i: usize) -> FieldElem {
    let k = zeta_root_order(d);
    if i == d.r {
        FieldElem::monomial(ZETA, k, 1)
    } else if i == d.tr() {
        FieldElem::monomial(ZETA, -k, 1)
    } else {
        FieldElem::one()
    }
}

/// The symbol `zeta` stands for `ζ_r^{1/k}` with `k` the value returned here.
pub fn zeta_root_order(d: &SatakeDatum) -> i16 {
    (d.n + 1) as i16
}

/// `η_i` as a field element.
pub fn eta_of(i: usize) -> FieldElem {
    eta(i)
}

/// `E_X^±` as an iterated `q^{-1}`-bracket.
pub fn ex(d: &SatakeDatum, plus: bool) -> Expr {
    let (a, b) = d.x_interval();
    nested(a, b, plus, FieldElem::q_pow(-1), Expr::e)
}

/// `F_X^±` as an iterated `q`-bracket.
pub fn fx(d: &SatakeDatum, plus: bool) -> Expr {
    let (a, b) = d.x_interval();
    nested(a, b, plus, FieldElem::q(), Expr::f)
}

/// `[x_a, [x_{a+1}, … x_b]_c]_c` (upwards) or the mirror (downwards).
pub fn nested(a: usize, b: usize, upwards: bool, c: FieldElem, gen: impl Fn(usize) -> Expr) -> Expr {
    let order: Vec<usize> = if upwards { (a..=b).collect() } else { (a..=b).rev().collect() };
    let mut acc = gen(*order.last().unwrap());
    for i in order.iter().rev().skip(1) {
        acc = Expr::qc(&gen(*i), &acc, c.clone());
    }
    acc
}

/// `p(x, y) = x²y − (q + q^{-1}) xyx + yx²`.
pub fn serre(x: &Expr, y: &Expr) -> Expr {
    Expr::sum(vec![
        Expr::prod(vec![x.clone(), x.clone(), y.clone()]),
        Expr::prod(vec![Expr::scalar(FieldElem::q_plus_qinv().neg()), x.clone(), y.clone(), x.clone()]),
        Expr::prod(vec![y.clone(), x.clone(), x.clone()]),
    ])
}

/// `ab − ba`.
pub fn comm(a: &Expr, b: &Expr) -> Expr {
    Expr::qc(a, b, FieldElem::one())
}

/// `(q − q^{-1})^{-1}`.
pub fn inv_q_minus_qinv() -> FieldElem {
    FieldElem::q_minus_qinv().inv().unwrap()
}

/// One instance of a defining relation, written as an expression that
/// must vanish.
#[derive(Debug, Clone)]
pub struct Relation {
    /// Stable identifier, e.g. `BiRel4[i=2,j=3]`.
    pub id: String,
    /// The relation family it instantiates.
    pub anchor: &'static str,
    pub expr: Expr,
}

/// Every instance of the defining relations of B_c over `M_X U_Θ^0`,
/// together with the relations of `M_X U_Θ^0` itself.
pub fn defining_relations(p: &Params) -> Vec<Relation> {
    let d = p.datum;
    let n = d.n;
    let q = FieldElem::q();
    let mut out = Vec::new();
    let thetas = d.theta_generators();
    for i in d.non_x_nodes() {
        let bi = p.b(i).unwrap();
        for (name, mu) in &thetas {
            let k = Expr::k(mu.clone());
            let c = FieldElem::q_pow(mu.pair_simple(i));
            out.push(Relation {
                id: format!("BiRel1[i={i},mu={name}]"),
                anchor: "B_iK_mu = q^(mu,alpha_i) K_mu B_i",
                expr: bi.mul(&k).sub(&Expr::prod(vec![Expr::scalar(c), k.clone(), bi.clone()])),
            });
        }
        for j in d.x_nodes() {
            out.push(Relation {
                id: format!("BiRel2[i={i},j={j}]"),
                anchor: "B_iE_j = E_jB_i",
                expr: comm(&bi, &Expr::e(j)),
            });
        }
        for j in 1..=n {
            if j == i || cartan_unchecked(i, j) != 0 {
                continue;
            }
            let mut e = comm(&bi, &p.b(j).unwrap());
            if j == d.tau(i) {
                e = e.sub(&p.gamma(i).unwrap().scaled(&inv_q_minus_qinv()));
            }
            out.push(Relation {
                id: format!("BiRel3[i={i},j={j}]"),
                anchor: "B_iB_j - B_jB_i = delta_(i,tau j) (q-q^-1)^-1 Gamma_i",
                expr: e,
            });
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            if cartan_unchecked(i, j) == -1 && !(d.in_x(i) && d.in_x(j)) {
                out.push(Relation {
                    id: format!("BiRel4[i={i},j={j}]"),
                    anchor: "p(B_i,B_j) = 0",
                    expr: serre(&p.b(i).unwrap(), &p.b(j).unwrap()),
                });
            }
        }
    }
    // Relations of M_X U_Θ^0.
    let xs = d.x_nodes();
    for &i in &xs {
        for &j in &xs {
            let mut e = comm(&Expr::e(i), &Expr::f(j));
            if i == j {
                let k = Expr::k(alpha(n, i)).sub(&Expr::k(alpha(n, i).neg()));
                e = e.sub(&k.scaled(&inv_q_minus_qinv()));
            }
            out.push(Relation {
                id: format!("MxRel.EF[i={i},j={j}]"),
                anchor: "E_iF_j - F_jE_i = delta_ij (K_i - K_i^-1)/(q-q^-1)",
                expr: e,
            });
            match cartan_unchecked(i, j) {
                0 if i < j => {
                    for (x, y, tag) in [(Expr::e(i), Expr::e(j), "E"), (Expr::f(i), Expr::f(j), "F")] {
                        out.push(Relation {
                            id: format!("MxRel.Serre{tag}[i={i},j={j}]"),
                            anchor: "E_iE_j = E_jE_i, F_iF_j = F_jF_i",
                            expr: comm(&x, &y),
                        });
                    }
                }
                -1 => {
                    for (x, y, tag) in [(Expr::e(i), Expr::e(j), "E"), (Expr::f(i), Expr::f(j), "F")] {
                        out.push(Relation {
                            id: format!("MxRel.Serre{tag}[i={i},j={j}]"),
                            anchor: "p(E_i,E_j) = p(F_i,F_j) = 0",
                            expr: serre(&x, &y),
                        });
                    }
                }
                _ => {}
            }
        }
        for (name, mu) in &thetas {
            let k = Expr::k(mu.clone());
            let c = FieldElem::q_pow(mu.pair_simple(i));
            out.push(Relation {
                id: format!("MxRel.KE[mu={name},j={i}]"),
                anchor: "K_mu E_j = q^(alpha_j,mu) E_j K_mu",
                expr: k.mul(&Expr::e(i)).sub(&Expr::prod(vec![Expr::scalar(c.clone()), Expr::e(i), k.clone()])),
            });
            out.push(Relation {
                id: format!("MxRel.KF[mu={name},j={i}]"),
                anchor: "K_mu F_j = q^-(alpha_j,mu) F_j K_mu",
                expr: Expr::prod(vec![Expr::scalar(c), k.clone(), Expr::f(i)]).sub(&Expr::f(i).mul(&k)),
            });
        }
    }
    let _ = q;
    out
}

/// Weight of an `Atom::K` leaf, if any.
pub fn k_weight(a: &Atom) -> Option<&Weight> {
    match a {
        Atom::K(w) => Some(w),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::uqcore::Pbw;

    fn vanishes(p: &Params, e: &Expr) -> bool {
        p.evaluate(&Pbw { n: p.n() }, e).unwrap().is_zero()
    }

    #[test]
    fn generator_examples() {
        let d = SatakeDatum::new(5, 2).unwrap();
        let p = Params::generic(d);
        assert_eq!(p.generator_expr(3).unwrap(), Expr::f(3));
        let b1 = p.generator_expr(1).unwrap();
        let expect = Expr::f(1).sub(&Expr::prod(vec![Expr::scalar(p.c(1)), Expr::e(5), Expr::k(alpha(5, 1).neg())]));
        assert_eq!(b1, expect);
        // C·C·q·c_r·c_τ(r) = 1
        let cc = p.big_c().mul(&p.big_c()).mul(&FieldElem::q()).mul(&p.c(2)).mul(&p.c(4));
        assert!(cc.is_one());
    }

    #[test]
    fn defining_relations_small() {
        for (n, r) in [(3, 1), (5, 2)] {
            let p = Params::generic(SatakeDatum::new(n, r).unwrap());
            for rel in defining_relations(&p) {
                assert!(vanishes(&p, &rel.expr), "{} fails at ({n},{r})", rel.id);
            }
        }
    }

    #[test]
    fn delta_matches_definition() {
        let p = Params::generic(SatakeDatum::new(5, 2).unwrap());
        let d = p.delta().unwrap();
        let again = Expr::prod(vec![Expr::scalar(FieldElem::q().mul(&p.c(4))), Expr::b(1), Expr::k(p.datum.l_weight(2)), p.kx(1)]);
        assert!(vanishes(&p, &d.sub(&again)));
    }
}
