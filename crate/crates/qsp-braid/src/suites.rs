//! Named identity checks and the suite runner.
//!
//! Every check is an expression that must vanish, built lazily from a
//! [`Ctx`] (a Satake datum with its three parameter families and the maps
//! over each).  A check can also carry a second route for the PBW engine
//! (for instance Lusztig's action on normal forms rather than on
//! expressions).  Each selected oracle evaluates the check independently:
//!
//! * `pbw`  — the PBW straightening engine (confirming);
//! * `elim` — the graded elimination engine (confirming);
//! * `rep`  — the vector representation and its tensor square (refuting only).
//!
//! A check passes iff every selected oracle reports zero.  Checks that do
//! not apply at the given rank are reported as skipped, never as passed.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::{Arc, Once};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::braidaction::{MapError, MapKind, MapSet};
use crate::coeffield::FieldElem;
use crate::expr::{Atom, Expr};
use crate::lusztig::{apply_t, apply_t_word, t_word_expr, BraidError, BraidWord};
use crate::qsp::{comm, defining_relations, nested, serre, Family, Params, QspError};
use crate::rep_oracle::{RepAlgebra, RepError};
use crate::rootdata::{alpha, cartan_unchecked, interval_root, varpi, SatakeDatum, Weight};
use crate::uqcore::elim::Elim;
use crate::uqcore::{with_max_degree, NormalElement, Pbw, ResourceLimit};

/// Errors raised while building a check.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CheckError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Qsp(#[from] QspError),
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// The verification suites, in dependency order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Suite {
    UqDefining,
    QspDefining,
    Lusztig,
    CtEndo,
    CtInverse,
    Braid,
    CommuteWx,
    Appendix,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::UqDefining,
        Suite::QspDefining,
        Suite::Lusztig,
        Suite::CtEndo,
        Suite::CtInverse,
        Suite::Braid,
        Suite::CommuteWx,
        Suite::Appendix,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::UqDefining => "uq-defining",
            Suite::QspDefining => "qsp-defining",
            Suite::Lusztig => "lusztig",
            Suite::CtEndo => "ct-endo",
            Suite::CtInverse => "ct-inverse",
            Suite::Braid => "braid",
            Suite::CommuteWx => "commute-wx",
            Suite::Appendix => "appendix",
        }
    }

    pub fn from_name(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }

    /// Suites whose results this one relies on.
    pub fn assumes(self) -> Vec<&'static str> {
        Suite::ALL.iter().take_while(|s| **s != self).map(|s| s.name()).collect()
    }
}

/// Which engines evaluate each check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Oracles {
    pub pbw: bool,
    pub elim: bool,
    pub rep: bool,
}

impl Oracles {
    pub const PBW: Oracles = Oracles {
        pbw: true,
        elim: false,
        rep: false,
    };
    pub const ALL: Oracles = Oracles {
        pbw: true,
        elim: true,
        rep: true,
    };

    pub fn from_name(s: &str) -> Option<Oracles> {
        Some(match s {
            "pbw" => Oracles::PBW,
            "elim" => Oracles {
                pbw: false,
                elim: true,
                rep: false,
            },
            "rep" => Oracles {
                pbw: false,
                elim: false,
                rep: true,
            },
            "all" => Oracles::ALL,
            _ => return None,
        })
    }
}

/// Outcome of one check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    ResourceSkip,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
            Status::ResourceSkip => "resource-skip",
        }
    }
}

/// Report of one check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub check_id: String,
    pub suite: &'static str,
    pub paper_anchor: String,
    pub status: Status,
    pub elapsed_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// Verdict of each oracle that ran: "zero", "nonzero" or a note.
    pub oracles: BTreeMap<String, String>,
}

/// Evaluation context: a datum with its parameter families and maps.
pub struct Ctx {
    pub datum: SatakeDatum,
    generic: MapSet,
    symmetric: MapSet,
    rescaled: MapSet,
}

impl Ctx {
    pub fn new(datum: SatakeDatum) -> Ctx {
        let g = Params::generic(datum);
        let res = g.rescaled();
        Ctx {
            datum,
            generic: MapSet::new(g),
            symmetric: MapSet::new(Params::symmetric(datum)),
            rescaled: MapSet::new(res),
        }
    }

    pub fn maps(&self, f: Family) -> &MapSet {
        match f {
            Family::Generic => &self.generic,
            Family::Symmetric => &self.symmetric,
            Family::Rescaled => &self.rescaled,
        }
    }

    pub fn params(&self, f: Family) -> &Params {
        &self.maps(f).params
    }

    pub fn n(&self) -> usize {
        self.datum.n
    }
}

type BuildFn = Arc<dyn Fn(&Ctx) -> Result<Expr, CheckError> + Send + Sync>;
type NfFn = Arc<dyn Fn(&Ctx) -> Result<NormalElement, CheckError> + Send + Sync>;

enum Body {
    Zero { build: BuildFn, nf: Option<NfFn> },
    Skipped(String),
}

/// One named check.
pub struct Check {
    pub id: String,
    pub suite: Suite,
    pub anchor: String,
    pub family: Family,
    body: Body,
}

impl Check {
    fn zero(suite: Suite, id: impl Into<String>, anchor: impl Into<String>, build: impl Fn(&Ctx) -> Result<Expr, CheckError> + Send + Sync + 'static) -> Check {
        Check {
            id: id.into(),
            suite,
            anchor: anchor.into(),
            family: Family::Generic,
            body: Body::Zero {
                build: Arc::new(build),
                nf: None,
            },
        }
    }

    fn skipped(suite: Suite, id: impl Into<String>, anchor: impl Into<String>, reason: impl Into<String>) -> Check {
        Check {
            id: id.into(),
            suite,
            anchor: anchor.into(),
            family: Family::Generic,
            body: Body::Skipped(reason.into()),
        }
    }

    fn family(mut self, f: Family) -> Check {
        self.family = f;
        self
    }

    fn with_nf(mut self, f: impl Fn(&Ctx) -> Result<NormalElement, CheckError> + Send + Sync + 'static) -> Check {
        if let Body::Zero { nf, .. } = &mut self.body {
            *nf = Some(Arc::new(f));
        }
        self
    }

    pub fn is_skipped(&self) -> bool {
        matches!(self.body, Body::Skipped(_))
    }

    /// The expression this check requires to vanish.
    pub fn expression(&self, ctx: &Ctx) -> Option<Result<Expr, CheckError>> {
        match &self.body {
            Body::Zero { build, .. } => Some(build(ctx)),
            Body::Skipped(_) => None,
        }
    }
}

// ---------------------------------------------------------------------------
// Small expression helpers
// ---------------------------------------------------------------------------

fn q() -> FieldElem {
    FieldElem::q()
}

fn qp(k: i32) -> FieldElem {
    FieldElem::q_pow(k)
}

fn sc(c: FieldElem) -> Expr {
    Expr::scalar(c)
}

fn qc(a: &Expr, b: &Expr) -> Expr {
    Expr::qc(a, b, q())
}

fn prod(xs: Vec<Expr>) -> Expr {
    Expr::prod(xs)
}

fn inv_qmq() -> FieldElem {
    FieldElem::q_minus_qinv().inv().unwrap()
}

/// Substitute every `B[j]` leaf by its expression in E, F, K.
pub fn resolve(p: &Params, e: &Expr) -> Expr {
    crate::expr::substitute(e, &|a: &Atom| match a {
        Atom::B(j) => p.generator_expr(*j).ok(),
        _ => None,
    })
}

fn pbw_eval(p: &Params, e: &Expr) -> Result<NormalElement, CheckError> {
    Ok(p.evaluate(&Pbw { n: p.n() }, e)?)
}

/// Generators of B_c used by the per-generator checks.
pub fn coideal_generators(d: &SatakeDatum) -> Vec<(String, Expr)> {
    let mut v = Vec::new();
    for j in d.non_x_nodes() {
        v.push((format!("B[{j}]"), Expr::b(j)));
    }
    for j in d.x_nodes() {
        v.push((format!("E[{j}]"), Expr::e(j)));
        v.push((format!("F[{j}]"), Expr::f(j)));
    }
    for (name, mu) in d.theta_generators() {
        v.push((format!("K[{name}]"), Expr::k(mu)));
    }
    v
}

fn uq_generators(n: usize) -> Vec<(String, Expr)> {
    let mut v = Vec::new();
    for j in 1..=n {
        v.push((format!("E[{j}]"), Expr::e(j)));
        v.push((format!("F[{j}]"), Expr::f(j)));
        v.push((format!("K[w[{j}]]"), Expr::k(varpi(n, j))));
    }
    v
}

fn rm1_reason() -> String {
    "needs r ≥ 2 (refers to B_(r-1))".to_string()
}

// ---------------------------------------------------------------------------
// Suite builders
// ---------------------------------------------------------------------------

/// All checks of a suite for the datum.
pub fn suite_checks(suite: Suite, d: &SatakeDatum) -> Vec<Check> {
    let mut v = match suite {
        Suite::UqDefining => uq_defining(d),
        Suite::QspDefining => qsp_defining(d),
        Suite::Lusztig => lusztig_suite(d),
        Suite::CtEndo => ct_endo(d),
        Suite::CtInverse => ct_inverse(d),
        Suite::Braid => braid_suite(d),
        Suite::CommuteWx => commute_wx(d),
        Suite::Appendix => appendix(d),
    };
    v.sort_by(|a, b| a.id.cmp(&b.id));
    v
}

fn uq_defining(d: &SatakeDatum) -> Vec<Check> {
    let n = d.n;
    let s = Suite::UqDefining;
    let mut v = Vec::new();
    for a in 1..=n {
        for b in 1..=n {
            let (wa, wb) = (varpi(n, a), varpi(n, b));
            v.push(Check::zero(s, format!("uq.KK[{a},{b}]"), "K_mu K_lambda = K_(mu+lambda)", move |_| {
                Ok(Expr::k(wa.clone()).mul(&Expr::k(wb.clone())).sub(&Expr::k(wa.add(&wb))))
            }));
        }
    }
    for k in 1..=n {
        for i in 1..=n {
            let w = varpi(n, k);
            let c = qp(w.pair_simple(i));
            let (w2, c2) = (w.clone(), c.clone());
            v.push(Check::zero(s, format!("uq.KE[{k},{i}]"), "K_mu E_i = q^(alpha_i,mu) E_i K_mu", move |_| {
                let kk = Expr::k(w.clone());
                Ok(kk.mul(&Expr::e(i)).sub(&prod(vec![sc(c.clone()), Expr::e(i), kk])))
            }));
            v.push(Check::zero(s, format!("uq.KF[{k},{i}]"), "K_mu F_i = q^-(alpha_i,mu) F_i K_mu", move |_| {
                let kk = Expr::k(w2.clone());
                Ok(prod(vec![sc(c2.clone()), kk.clone(), Expr::f(i)]).sub(&Expr::f(i).mul(&kk)))
            }));
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            v.push(Check::zero(s, format!("uq.EF[{i},{j}]"), "E_iF_j - F_jE_i = delta_ij (K_i - K_i^-1)/(q-q^-1)", move |_| {
                let mut e = comm(&Expr::e(i), &Expr::f(j));
                if i == j {
                    let k = Expr::k(alpha(n, i)).sub(&Expr::k(alpha(n, i).neg()));
                    e = e.sub(&k.scaled(&inv_qmq()));
                }
                Ok(e)
            }));
            match cartan_unchecked(i, j) {
                0 if i < j => {
                    v.push(Check::zero(s, format!("uq.SerreE0[{i},{j}]"), "E_iE_j = E_jE_i", move |_| Ok(comm(&Expr::e(i), &Expr::e(j)))));
                    v.push(Check::zero(s, format!("uq.SerreF0[{i},{j}]"), "F_iF_j = F_jF_i", move |_| Ok(comm(&Expr::f(i), &Expr::f(j)))));
                }
                -1 => {
                    v.push(Check::zero(s, format!("uq.SerreE[{i},{j}]"), "p(E_i,E_j) = 0", move |_| Ok(serre(&Expr::e(i), &Expr::e(j)))));
                    v.push(Check::zero(s, format!("uq.SerreF[{i},{j}]"), "p(F_i,F_j) = 0", move |_| Ok(serre(&Expr::f(i), &Expr::f(j)))));
                }
                _ => {}
            }
        }
    }
    v
}

fn qsp_defining(d: &SatakeDatum) -> Vec<Check> {
    let s = Suite::QspDefining;
    let mut v = Vec::new();
    let rels = defining_relations(&Params::generic(*d));
    for (idx, rel) in rels.iter().enumerate() {
        v.push(Check::zero(s, format!("qsp.{}", rel.id), rel.anchor, move |ctx| {
            Ok(defining_relations(ctx.params(Family::Generic))[idx].expr.clone())
        }));
    }
    for i in d.non_x_nodes() {
        let ti = d.tau(i);
        v.push(Check::zero(s, format!("qsp.Gamma-pin[{i}]"), "[B_i, B_tau(i)] = (q-q^-1)^-1 Gamma_i", move |ctx| {
            let p = ctx.params(Family::Generic);
            Ok(comm(&p.generator_expr(i)?, &p.generator_expr(ti)?).sub(&resolve(p, &p.gamma(i)?).scaled(&inv_qmq())))
        }));
    }
    let (r, tr) = (d.r, d.tr());
    let n = d.n;
    v.push(Check::zero(s, "qsp.silent[Br,Kr+1inv]", "[B_r, K_(r+1)^-1]_q = 0", move |_| {
        Ok(qc(&Expr::b(r), &Expr::k(alpha(n, r + 1).neg())))
    }));
    let tr1 = d.tau(r + 1);
    v.push(Check::zero(s, "qsp.silent[Ktr+1,Btr]", "[K_tau(r+1), B_tau(r)]_q = 0", move |_| {
        Ok(qc(&Expr::k(alpha(n, tr1)), &Expr::b(tr)))
    }));
    v.push(Check::zero(s, "qsp.Zr-formula", "Z_r = -(1-q^-2) E_X^+ L_tau(r)", move |ctx| {
        let p = ctx.params(Family::Generic);
        let expect = prod(vec![sc(FieldElem::one().sub(&qp(-2)).neg()), p.ex(true), Expr::k(p.datum.l_weight(tr))]);
        Ok(p.z(r)?.sub(&expect))
    }));
    v
}

fn lusztig_suite(d: &SatakeDatum) -> Vec<Check> {
    let s = Suite::Lusztig;
    let n = d.n;
    let mut v = Vec::new();
    let gens = uq_generators(n);
    let word_check = |id: String, anchor: &str, w1: BraidWord, w2: BraidWord, x: Expr| -> Check {
        let (a1, a2, x1) = (w1.clone(), w2.clone(), x.clone());
        Check::zero(s, id, anchor.to_string(), move |_| Ok(t_word_expr(n, &w1, &x).sub(&t_word_expr(n, &w2, &x))))
            .with_nf(move |ctx| {
                let xn = pbw_eval(ctx.params(Family::Generic), &x1)?;
                Ok(apply_t_word(&a1, &xn)?.sub(&apply_t_word(&a2, &xn)?))
            })
    };
    for i in 1..=n {
        for (name, g) in &gens {
            let ti = BraidWord::positive(&[i]);
            let both = ti.then(&ti.inverse());
            let both2 = ti.inverse().then(&ti);
            v.push(word_check(format!("lusztig.TTinv[{i}]({name})"), "T_i T_i^-1 = id", both, BraidWord::new(), g.clone()));
            v.push(word_check(format!("lusztig.TinvT[{i}]({name})"), "T_i^-1 T_i = id", both2, BraidWord::new(), g.clone()));
        }
    }
    for i in 1..=n {
        for j in (i + 1)..=n {
            let (w1, w2, anchor) = if cartan_unchecked(i, j) == -1 {
                (BraidWord::positive(&[i, j, i]), BraidWord::positive(&[j, i, j]), "T_iT_jT_i = T_jT_iT_j")
            } else {
                (BraidWord::positive(&[i, j]), BraidWord::positive(&[j, i]), "T_iT_j = T_jT_i")
            };
            for (name, g) in &gens {
                v.push(word_check(format!("lusztig.braid[{i},{j}]({name})"), anchor, w1.clone(), w2.clone(), g.clone()));
            }
        }
    }
    // T_{w_X} on E_X^±, F_X^±.
    let wx = BraidWord::positive(&d.wx_word());
    for plus in [true, false] {
        let sign = if plus { "+" } else { "-" };
        let w = wx.clone();
        let w2 = wx.clone();
        let dd = *d;
        v.push(
            Check::zero(s, format!("lusztig.TwX(FX{sign})"), "T_wX(F_X^pm) = -K_X^-1 E_X^pm", move |ctx| {
                let p = ctx.params(Family::Generic);
                Ok(t_word_expr(n, &w, &p.fx(plus)).add(&p.kx(-1).mul(&p.ex(plus))))
            })
            .with_nf(move |ctx| {
                let p = ctx.params(Family::Generic);
                let img = apply_t_word(&wx_of(&dd), &pbw_eval(p, &p.fx(plus))?)?;
                Ok(img.add(&pbw_eval(p, &p.kx(-1).mul(&p.ex(plus)))?))
            }),
        );
        v.push(
            Check::zero(s, format!("lusztig.TwX(EX{sign})"), "T_wX(E_X^pm) = -F_X^pm K_X", move |ctx| {
                let p = ctx.params(Family::Generic);
                Ok(t_word_expr(n, &w2, &p.ex(plus)).add(&p.fx(plus).mul(&p.kx(1))))
            })
            .with_nf(move |ctx| {
                let p = ctx.params(Family::Generic);
                let img = apply_t_word(&wx_of(&dd), &pbw_eval(p, &p.ex(plus))?)?;
                Ok(img.add(&pbw_eval(p, &p.fx(plus).mul(&p.kx(1)))?))
            }),
        );
    }
    // Reduced-word independence for w_X and the restricted word at r.
    let rw = d.restricted_word(d.r);
    for (label, word) in [("wX", d.wx_word()), ("sigma~r", rw)] {
        let alts = alternative_reduced_words(n, &word);
        for (k, alt) in alts.into_iter().enumerate() {
            for (name, g) in &gens {
                v.push(word_check(
                    format!("lusztig.reduced[{label}#{k}]({name})"),
                    "T_w depends only on w",
                    BraidWord::positive(&word),
                    BraidWord::positive(&alt),
                    g.clone(),
                ));
            }
        }
    }
    // T_j(B_k) and T_wX(B_r) formulas, checked on U_q.
    for j in d.x_nodes() {
        for k in d.non_x_nodes() {
            let anchor = "T_i(B_j) = [B_j, F_i]_q if a_ij = -1, else B_j";
            v.push(lusztig_on_b(s, format!("lusztig.TiBj[{j},{k}]"), anchor, BraidWord::positive(&[j]), MapKind::T(j), k));
            let anchor = "T_i^-1(B_j) = [F_i, B_j]_q if a_ij = -1, else B_j";
            v.push(lusztig_on_b(s, format!("lusztig.TiinvBj[{j},{k}]"), anchor, BraidWord::positive(&[j]).inverse(), MapKind::TInv(j), k));
        }
    }
    for k in [d.r, d.tr()] {
        v.push(lusztig_on_b(s, format!("lusztig.TwXB[{k}]"), "T_wX(B_r) = [B_r, F_X^+]_q", BraidWord::positive(&d.wx_word()), MapKind::TwX, k));
        v.push(lusztig_on_b(
            s,
            format!("lusztig.TwXinvB[{k}]"),
            "T_wX^-1(B_r) = [F_X^-, B_r]_q",
            BraidWord::positive(&d.wx_word()).inverse(),
            MapKind::TwXInv,
            k,
        ));
    }
    v
}

fn wx_of(d: &SatakeDatum) -> BraidWord {
    BraidWord::positive(&d.wx_word())
}

/// Lusztig's action on `B_k` in U_q against the coideal-side formula.
fn lusztig_on_b(s: Suite, id: String, anchor: &str, w: BraidWord, kind: MapKind, k: usize) -> Check {
    let n_w = w.clone();
    Check::zero(s, id, anchor.to_string(), move |ctx| {
        let p = ctx.params(Family::Generic);
        let lhs = t_word_expr(p.n(), &w, &p.generator_expr(k)?);
        let rhs = ctx.maps(Family::Generic).apply(&[kind], &Expr::b(k))?;
        Ok(lhs.sub(&rhs))
    })
    .with_nf(move |ctx| {
        let p = ctx.params(Family::Generic);
        let lhs = apply_t_word(&n_w, &pbw_eval(p, &Expr::b(k))?)?;
        let rhs = pbw_eval(p, &ctx.maps(Family::Generic).apply(&[kind], &Expr::b(k))?)?;
        Ok(lhs.sub(&rhs))
    })
}

/// Other reduced words for the element given by `word`: the ones obtained
/// by always peeling off the smallest, respectively largest, right descent.
pub fn alternative_reduced_words(n: usize, word: &[usize]) -> Vec<Vec<usize>> {
    let mut perm: Vec<usize> = (0..=n).collect();
    for &i in word {
        perm.swap(i - 1, i);
    }
    let mut out = Vec::new();
    for largest in [false, true] {
        let mut p = perm.clone();
        let mut rev = Vec::new();
        loop {
            let descents: Vec<usize> = (1..=n).filter(|&i| p[i - 1] > p[i]).collect();
            let Some(&i) = (if largest { descents.last() } else { descents.first() }) else {
                break;
            };
            // p = p' s_i with p' = p s_i: swapping positions undoes the letter.
            p.swap(i - 1, i);
            rev.push(i);
        }
        rev.reverse();
        if rev != word && !out.contains(&rev) {
            out.push(rev);
        }
    }
    out
}

fn ct_endo(d: &SatakeDatum) -> Vec<Check> {
    let s = Suite::CtEndo;
    let mut v = Vec::new();
    let rels = defining_relations(&Params::generic(*d));
    for i in 1..=d.r {
        for kind in [MapKind::Ct(i), MapKind::CtInv(i)] {
            for (idx, rel) in rels.iter().enumerate() {
                v.push(Check::zero(s, format!("ct-endo.{}.{}", kind.name(), rel.id), format!("image of {} vanishes", rel.anchor), move |ctx| {
                    let rel = defining_relations(ctx.params(Family::Generic))[idx].expr.clone();
                    Ok(ctx.maps(Family::Generic).apply(&[kind], &rel)?)
                }));
            }
        }
        // Restriction to M_X U_Θ^0 agrees with T̃_i computed in U_q.
        let w = BraidWord::positive(&d.restricted_word(i));
        for (name, g) in coideal_generators(d) {
            if matches!(g.node(), crate::expr::Node::Atom(Atom::B(_))) {
                continue;
            }
            let (w1, w2, g1) = (w.clone(), w.clone(), g.clone());
            v.push(
                Check::zero(s, format!("ct-endo.restriction[{i}]({name})"), "ct_i = T~_i on M_X U_Theta^0", move |ctx| {
                    let img = ctx.maps(Family::Generic).apply(&[MapKind::Ct(i)], &g)?;
                    Ok(img.sub(&t_word_expr(ctx.n(), &w1, &g)))
                })
                .with_nf(move |ctx| {
                    let p = ctx.params(Family::Generic);
                    let img = pbw_eval(p, &ctx.maps(Family::Generic).apply(&[MapKind::Ct(i)], &g1)?)?;
                    Ok(img.sub(&apply_t_word(&w2, &pbw_eval(p, &g1)?)?))
                }),
            );
        }
    }
    v
}

fn ct_inverse(d: &SatakeDatum) -> Vec<Check> {
    let s = Suite::CtInverse;
    let mut v = Vec::new();
    let gens = coideal_generators(d);
    for i in 1..=d.r {
        for (name, g) in &gens {
            for (tag, word) in [("ct.ctinv", [MapKind::Ct(i), MapKind::CtInv(i)]), ("ctinv.ct", [MapKind::CtInv(i), MapKind::Ct(i)])] {
                let g = g.clone();
                v.push(Check::zero(s, format!("ct-inverse.{tag}[{i}]({name})"), "ct_i o ct_i^-1 = ct_i^-1 o ct_i = id", move |ctx| {
                    Ok(ctx.maps(Family::Generic).apply(&word, &g)?.sub(&g))
                }));
            }
        }
    }
    // The anti-involution φ (symmetric parameters).
    let sym = Family::Symmetric;
    let (r, tr, n) = (d.r, d.tr(), d.n);
    for (name, g) in &gens {
        let g1 = g.clone();
        v.push(Check::zero(s, format!("phi.square({name})"), "phi^2 = id", move |ctx| Ok(ctx.maps(sym).apply(&[MapKind::Phi, MapKind::Phi], &g1)?.sub(&g1))).family(sym));
        let g2 = g.clone();
        v.push(
            Check::zero(s, format!("phi.ct-conj({name})"), "ct_r^-1 = phi o ct_r o phi", move |ctx| {
                let m = ctx.maps(sym);
                Ok(m.apply(&[MapKind::Phi, MapKind::Ct(r), MapKind::Phi], &g2)?.sub(&m.apply(&[MapKind::CtInv(r)], &g2)?))
            })
            .family(sym),
        );
    }
    let rels = defining_relations(&Params::symmetric(*d));
    for (idx, rel) in rels.iter().enumerate() {
        v.push(
            Check::zero(s, format!("phi.relation.{}", rel.id), "phi is an anti-automorphism of B_c", move |ctx| {
                let rel = defining_relations(ctx.params(sym))[idx].expr.clone();
                Ok(ctx.maps(sym).apply(&[MapKind::Phi], &rel)?)
            })
            .family(sym),
        );
    }
    for plus in [true, false] {
        let sign = if plus { "+" } else { "-" };
        v.push(Check::zero(s, format!("phi.EX{sign}"), "phi(E_X^+) = E_X^-", move |ctx| {
            let p = ctx.params(sym);
            Ok(ctx.maps(sym).apply(&[MapKind::Phi], &p.ex(plus))?.sub(&p.ex(!plus)))
        }).family(sym));
    }
    for i in d.non_x_nodes() {
        v.push(Check::zero(s, format!("phi.Z[{i}]"), "phi(Z_i) = Z_tau(i)", move |ctx| {
            let p = ctx.params(sym);
            Ok(ctx.maps(sym).apply(&[MapKind::Phi], &p.z(i)?)?.sub(&p.z(p.datum.tau(i))?))
        }).family(sym));
    }
    v.push(Check::zero(s, "phi.BrLrK", "phi(B_r L_r K_varpi'_(r+1)) = q^2 B_r L_tau(r) K_varpi'_tau(r+1)", move |ctx| {
        let p = ctx.params(sym);
        let x = prod(vec![p.b(r)?, p.l(r)?, p.k_varpi_prime(r + 1)]);
        let y = prod(vec![sc(qp(2)), p.b(r)?, p.l(tr)?, p.k_varpi_prime(p.datum.tau(r + 1))]);
        Ok(ctx.maps(sym).apply(&[MapKind::Phi], &x)?.sub(&y))
    }).family(sym));
    if r >= 2 {
        v.push(Check::zero(s, "phi.Br-1LrKX", "phi(B_(r-1) L_r K_X) = q^-1 B_(r-1) L_tau(r) K_X^-1", move |ctx| {
            let p = ctx.params(sym);
            let x = prod(vec![p.b(r - 1)?, p.l(r)?, p.kx(1)]);
            let y = prod(vec![sc(qp(-1)), p.b(r - 1)?, p.l(tr)?, p.kx(-1)]);
            Ok(ctx.maps(sym).apply(&[MapKind::Phi], &x)?.sub(&y))
        }).family(sym));
    } else {
        v.push(Check::skipped(s, "phi.Br-1LrKX", "phi(B_(r-1) L_r K_X)", rm1_reason()));
    }
    // Reparametrization by A_{η,ζ} and f.
    let res = Family::Rescaled;
    let mut nodes = vec![r];
    if r >= 2 {
        nodes.push(r - 1);
    } else {
        v.push(Check::skipped(s, "reparam.ctinv[B_r-1]", "ct_(r,c')^-1 = A o ct_(r,c)^-1 o A^-1 o f", rm1_reason()));
    }
    for j in nodes {
        let tag = if j == r { "B_r" } else { "B_r-1" };
        v.push(
            Check::zero(s, format!("reparam.ctinv[{tag}]"), "ct_(r,c')^-1 = A o ct_(r,c)^-1 o A^-1 o f", move |ctx| {
                let lhs = ctx.maps(res).apply(&[MapKind::CtInv(r)], &Expr::b(j))?;
                let x = ctx.maps(res).apply(&[MapKind::F], &Expr::b(j))?;
                let x = ctx.maps(Family::Generic).apply(&[MapKind::A, MapKind::CtInv(r), MapKind::AInv], &x)?;
                Ok(lhs.sub(&x))
            })
            .family(res),
        );
    }
    v.push(
        Check::zero(s, "reparam.C", "C^c eta_r^-1 eta_tau(r)^-1 = C^c'", |ctx| {
            let p = ctx.params(Family::Rescaled);
            let d = p.datum;
            let c2 = p.big_c().mul(&p.big_c()).mul(&q()).mul(&p.c(d.r)).mul(&p.c(d.tr()));
            Ok(sc(c2.sub(&FieldElem::one())))
        })
        .family(res),
    );
    for j in d.non_x_nodes() {
        if j == r || j == tr {
            continue;
        }
        v.push(Check::zero(s, format!("reparam.f[{j}]"), "f(B_j) = B_j otherwise", move |ctx| {
            Ok(ctx.maps(res).apply(&[MapKind::F], &Expr::b(j))?.sub(&Expr::b(j)))
        }).family(res));
    }
    for j in d.x_nodes() {
        let w = d.varpi_prime(j);
        let a = alpha(n, j);
        v.push(Check::zero(s, format!("reparam.A-torus[{j}]"), "A(K_varpi_j) = K_varpi_j, A(K_j) = K_j for j in X", move |ctx| {
            let x = Expr::k(w.clone()).add(&Expr::k(a.clone()));
            Ok(ctx.maps(Family::Generic).apply(&[MapKind::A], &x)?.sub(&x))
        }).family(res));
    }
    let rels = defining_relations(&Params::generic(*d));
    for (idx, rel) in rels.iter().enumerate() {
        v.push(
            Check::zero(s, format!("reparam.A.{}", rel.id), "A maps B_c to B_c'", move |ctx| {
                let rel = defining_relations(ctx.params(Family::Generic))[idx].expr.clone();
                Ok(ctx.maps(Family::Generic).apply(&[MapKind::A], &rel)?)
            })
            .family(res),
        );
    }
    v
}

fn braid_suite(d: &SatakeDatum) -> Vec<Check> {
    let s = Suite::Braid;
    let r = d.r;
    let gens = coideal_generators(d);
    let mut v = Vec::new();
    let mut pair = |id: &str, anchor: &str, lhs: Vec<MapKind>, rhs: Vec<MapKind>| {
        for (name, g) in &gens {
            let (l, rr, g) = (lhs.clone(), rhs.clone(), g.clone());
            v.push(Check::zero(s, format!("braid.{id}({name})"), anchor.to_string(), move |ctx| {
                let m = ctx.maps(Family::Generic);
                Ok(m.apply(&l, &g)?.sub(&m.apply(&rr, &g)?))
            }));
        }
    };
    if r >= 2 {
        let (a, b) = (MapKind::Ct(r), MapKind::Ct(r - 1));
        pair(&format!("len4[{r},{}]", r - 1), "ct_r ct_(r-1) ct_r ct_(r-1) = ct_(r-1) ct_r ct_(r-1) ct_r", vec![a, b, a, b], vec![b, a, b, a]);
    }
    for i in 1..r.saturating_sub(1) {
        pair(&format!("comm[{r},{i}]"), "ct_r ct_i = ct_i ct_r (i <= r-2)", vec![MapKind::Ct(r), MapKind::Ct(i)], vec![MapKind::Ct(i), MapKind::Ct(r)]);
    }
    for i in 1..r {
        for j in (i + 1)..r {
            if j == i + 1 {
                let (a, b) = (MapKind::Ct(i), MapKind::Ct(j));
                pair(&format!("len3[{i},{j}]"), "ct_i ct_(i+1) ct_i = ct_(i+1) ct_i ct_(i+1)", vec![a, b, a], vec![b, a, b]);
            } else {
                pair(&format!("comm[{i},{j}]"), "ct_i ct_j = ct_j ct_i (|i-j| > 1)", vec![MapKind::Ct(i), MapKind::Ct(j)], vec![MapKind::Ct(j), MapKind::Ct(i)]);
            }
        }
    }
    if r < 2 {
        v.push(Check::skipped(s, "braid.len4", "ct_r ct_(r-1) ct_r ct_(r-1) = ct_(r-1) ct_r ct_(r-1) ct_r", "needs r ≥ 2"));
    }
    if r < 3 {
        v.push(Check::skipped(s, "braid.comm[r,i<=r-2]", "ct_r ct_i = ct_i ct_r (i <= r-2)", "needs r ≥ 3"));
        v.push(Check::skipped(s, "braid.len3", "ct_i ct_(i+1) ct_i = ct_(i+1) ct_i ct_(i+1)", "needs r ≥ 3"));
    }
    v
}

fn commute_wx(d: &SatakeDatum) -> Vec<Check> {
    let s = Suite::CommuteWx;
    let gens = coideal_generators(d);
    let mut v = Vec::new();
    for j in d.x_nodes() {
        for i in 1..=d.r {
            for (name, g) in &gens {
                let (g1, g2) = (g.clone(), g.clone());
                v.push(
                    Check::zero(s, format!("wx.T[{j}]ct[{i}]({name})"), "T_j ct_i(x) = ct_i T_j(x)", move |ctx| {
                        let p = ctx.params(Family::Generic);
                        let m = ctx.maps(Family::Generic);
                        let lhs = t_word_expr(p.n(), &BraidWord::positive(&[j]), &resolve(p, &m.apply(&[MapKind::Ct(i)], &g1)?));
                        let rhs = m.apply(&[MapKind::Ct(i), MapKind::T(j)], &g1)?;
                        Ok(lhs.sub(&rhs))
                    })
                    .with_nf(move |ctx| {
                        let p = ctx.params(Family::Generic);
                        let m = ctx.maps(Family::Generic);
                        let lhs = apply_t(j, &pbw_eval(p, &m.apply(&[MapKind::Ct(i)], &g2)?)?)?;
                        let rhs = pbw_eval(p, &m.apply(&[MapKind::Ct(i), MapKind::T(j)], &g2)?)?;
                        Ok(lhs.sub(&rhs))
                    }),
                );
            }
        }
    }
    v
}

fn appendix(d: &SatakeDatum) -> Vec<Check> {
    let s = Suite::Appendix;
    let n = d.n;
    let (r, tr) = (d.r, d.tr());
    let mut v = Vec::new();

    // Identities valid in any associative algebra.
    let samples: Vec<(&str, [Expr; 3])> = vec![
        ("E1,F1,K", [Expr::e(1), Expr::f(1), Expr::k(varpi(n, 1))]),
        ("E1,E2,F2", [Expr::e(1), Expr::e(2), Expr::f(2)]),
        ("Br,Btr,FX", [Expr::b(r), Expr::b(tr), crate::qsp::fx(d, true)]),
        ("Btr,EX,Br", [Expr::b(tr), crate::qsp::ex(d, true), Expr::b(r)]),
    ];
    for (name, [x, y, z]) in samples {
        v.push(Check::zero(s, format!("app.qcomm[{name}]"), "[[x,y]_q,z]_q - [x,[y,z]_q]_q = q[[x,z],y]", move |_| {
            Ok(qc(&qc(&x, &y), &z).sub(&qc(&x, &qc(&y, &z))).sub(&comm(&comm(&x, &z), &y).scaled(&q())))
        }));
    }
    for a in 1..=n {
        for b in a..=n {
            v.push(Check::zero(s, format!("app.EF-FE[{a},{b}]"), "E_J^+F_J^- - F_J^-E_J^+ = (K_J - K_J^-1)/(q-q^-1) = E_J^-F_J^+ - F_J^+E_J^-", move |_| {
                let qi = qp(-1);
                let ep = nested(a, b, true, qi.clone(), Expr::e);
                let em = nested(a, b, false, qi, Expr::e);
                let fp = nested(a, b, true, q(), Expr::f);
                let fm = nested(a, b, false, q(), Expr::f);
                let kj = Expr::k(interval_root(n, a, b)).sub(&Expr::k(interval_root(n, a, b).neg())).scaled(&inv_qmq());
                Ok(comm(&ep, &fm).sub(&kj).add(&comm(&em, &fp).sub(&kj)))
            }));
        }
    }
    v.push(Check::zero(s, "app.FX_Ztr_comm", "[F_X^+, Z_tau(r)] = q^-1 (K_X - K_X^-1) L_r", move |ctx| {
        let p = ctx.params(Family::Generic);
        let rhs = prod(vec![sc(qp(-1)), p.kx(1).sub(&p.kx(-1)), p.l(r)?]);
        Ok(comm(&p.fx(true), &p.z(tr)?).sub(&rhs))
    }));

    // Everything below refers to B_(r-1).
    type Build = Box<dyn Fn(&Params) -> Result<Expr, CheckError> + Send + Sync>;
    let mut rm1: Vec<(&str, &str, Build)> = Vec::new();
    rm1.push(("app.simplecomm1", "[B_(r-1), [F_X^+, Z_r]]_q = 0", Box::new(move |p| {
        Ok(qc(&p.b(r - 1)?, &comm(&p.fx(true), &p.z(r)?)))
    })));
    rm1.push(("app.simplecomm2", "[B_(r-1), [F_X^+, Z_tau(r)]]_q = -(q-q^-1) B_(r-1) L_r (K_X - K_X^-1)", Box::new(move |p| {
        let rhs = prod(vec![sc(FieldElem::q_minus_qinv().neg()), p.b(r - 1)?, p.l(r)?, p.kx(1).sub(&p.kx(-1))]);
        Ok(qc(&p.b(r - 1)?, &comm(&p.fx(true), &p.z(tr)?)).sub(&rhs))
    })));
    rm1.push(("app.Newctr1", "[B_(r-1),[B_r,[F_X^+,B_tau(r)]_q]_q]_q = [S, B_tau(r)]_q + q c_tau(r) B_(r-1) L_r (K_X - K_X^-1)", Box::new(move |p| {
        let lhs = qc(&p.b(r - 1)?, &qc(&p.b(r)?, &qc(&p.fx(true), &p.b(tr)?)));
        let tail = prod(vec![sc(q().mul(&p.c(tr))), p.b(r - 1)?, p.l(r)?, p.kx(1).sub(&p.kx(-1))]);
        Ok(lhs.sub(&qc(&p.s()?, &p.b(tr)?)).sub(&tail))
    })));
    rm1.push(("app.Newctr2", "[B_tau(r-1),[B_tau(r),[F_X^-,B_r]_q]_q]_q = [S^tau, B_r]_q + q c_r B_tau(r-1) L_tau(r) (K_X - K_X^-1)", Box::new(move |p| {
        let trm1 = p.datum.tau(r - 1);
        let lhs = qc(&p.b(trm1)?, &qc(&p.b(tr)?, &qc(&p.fx(false), &p.b(r)?)));
        let tail = prod(vec![sc(q().mul(&p.c(r))), p.b(trm1)?, p.l(tr)?, p.kx(1).sub(&p.kx(-1))]);
        Ok(lhs.sub(&qc(&p.st()?, &p.b(r)?)).sub(&tail))
    })));
    rm1.push(("app.ZtrS", "Z_tau(r) S = q^-1 S Z_tau(r) + (1-q^-2)[B_(r-1),B_r]_q L_r K_X", Box::new(move |p| {
        let (z, sx) = (p.z(tr)?, p.s()?);
        let tail = prod(vec![sc(FieldElem::one().sub(&qp(-2))), qc(&p.b(r - 1)?, &p.b(r)?), p.l(r)?, p.kx(1)]);
        Ok(z.mul(&sx).sub(&prod(vec![sc(qp(-1)), sx, z])).sub(&tail))
    })));
    rm1.push(("app.ZrSt", "Z_r S^tau = q^-1 S^tau Z_r + (1-q^-2)[B_tau(r-1),B_tau(r)]_q L_tau(r) K_X", Box::new(move |p| {
        let (z, sx) = (p.z(r)?, p.st()?);
        let trm1 = p.datum.tau(r - 1);
        let tail = prod(vec![sc(FieldElem::one().sub(&qp(-2))), qc(&p.b(trm1)?, &p.b(tr)?), p.l(tr)?, p.kx(1)]);
        Ok(z.mul(&sx).sub(&prod(vec![sc(qp(-1)), sx, z])).sub(&tail))
    })));
    rm1.push(("app.ZrT", "Z_r T = q T Z_r - (q-q^-1)[B_r,B_(r-1)]_q L_tau(r) K_X^-1", Box::new(move |p| {
        let (z, t) = (p.z(r)?, p.t_big()?);
        let tail = prod(vec![sc(FieldElem::q_minus_qinv()), qc(&p.b(r)?, &p.b(r - 1)?), p.l(tr)?, p.kx(-1)]);
        Ok(z.mul(&t).sub(&prod(vec![sc(q()), t, z])).add(&tail))
    })));
    rm1.push(("app.BrS", "B_r S = S B_r", Box::new(move |p| Ok(comm(&p.b(r)?, &p.s()?)))));
    rm1.push(("app.BtrSt", "B_tau(r) S^tau = S^tau B_tau(r)", Box::new(move |p| Ok(comm(&p.b(tr)?, &p.st()?)))));
    rm1.push(("app.SBtr-1", "S B_tau(r-1) = B_tau(r-1) S - q c_(r-1) Z_(r-1) [B_r, F_X^+]_q", Box::new(move |p| {
        let trm1 = p.datum.tau(r - 1);
        let tail = prod(vec![sc(q().mul(&p.c(r - 1))), p.z(r - 1)?, qc(&p.b(r)?, &p.fx(true))]);
        Ok(comm(&p.s()?, &p.b(trm1)?).add(&tail))
    })));
    rm1.push(("app.StBr-1", "S^tau B_(r-1) = B_(r-1) S^tau - q c_tau(r-1) Z_tau(r-1) [B_tau(r), F_X^-]_q", Box::new(move |p| {
        let trm1 = p.datum.tau(r - 1);
        let tail = prod(vec![sc(q().mul(&p.c(trm1))), p.z(trm1)?, qc(&p.b(tr)?, &p.fx(false))]);
        Ok(comm(&p.st()?, &p.b(r - 1)?).add(&tail))
    })));
    rm1.push(("app.SSt", "S S^tau - S^tau S = Omega^- - Omega^+", Box::new(move |p| {
        Ok(comm(&p.s()?, &p.st()?).sub(&p.omega(false)?).add(&p.omega(true)?))
    })));
    rm1.push(("app.Tech_Calc_1", "[[S,B_tau(r)]_q + Delta, [S^tau,B_r]_q + Delta^tau] = -(q c_r c_tau(r)/(q-q^-1)) (K_X - K_X^-1) K_X Gamma_(r-1) - [Delta, Delta^tau]", Box::new(move |p| {
        let a = qc(&p.s()?, &p.b(tr)?);
        let b = qc(&p.st()?, &p.b(r)?);
        let coef = q().mul(&p.c(r)).mul(&p.c(tr)).mul(&inv_qmq());
        let tail = prod(vec![sc(coef), p.kx(1).sub(&p.kx(-1)), p.kx(1), p.gamma(r - 1)?]);
        Ok(Expr::sum(vec![comm(&a, &b), comm(&p.delta()?, &b), comm(&a, &p.deltat()?), tail]))
    })));
    rm1.push(("app.QSerre2_Rel1", "Z_r [S,B_tau(r)]_q = q^-1 [S,B_tau(r)]_q Z_r + q^-2 (q-q^-1) Delta Z_r", Box::new(move |p| {
        let (z, x) = (p.z(r)?, qc(&p.s()?, &p.b(tr)?));
        let tail = prod(vec![sc(qp(-2).mul(&FieldElem::q_minus_qinv())), p.delta()?, z.clone()]);
        Ok(z.mul(&x).sub(&prod(vec![sc(qp(-1)), x, z])).sub(&tail))
    })));
    rm1.push(("app.QSerre2_Rel2", "S [S,B_tau(r)]_q = q^-1 [S,B_tau(r)]_q S - q^-2 (q^2-q^-2) S Delta", Box::new(move |p| {
        let (sx, x) = (p.s()?, qc(&p.s()?, &p.b(tr)?));
        let tail = prod(vec![sc(qp(-2).mul(&qp(2).sub(&qp(-2)))), sx.clone(), p.delta()?]);
        Ok(sx.mul(&x).sub(&prod(vec![sc(qp(-1)), x, sx])).add(&tail))
    })));
    rm1.push(("app.ctrinv1", "[F_X^-, [S, Z_r]_q]_q = (q^2-1) S L_tau(r) K_X^-1", Box::new(move |p| {
        let tail = prod(vec![sc(qp(2).sub(&FieldElem::one())), p.s()?, p.l(tr)?, p.kx(-1)]);
        Ok(qc(&p.fx(false), &qc(&p.s()?, &p.z(r)?)).sub(&tail))
    })));
    rm1.push(("app.ctrinv2", "[[Z_tau(r), T]_q, F_X^+]_q = (1-q^-2) T L_r K_X", Box::new(move |p| {
        let tail = prod(vec![sc(FieldElem::one().sub(&qp(-2))), p.t_big()?, p.l(r)?, p.kx(1)]);
        Ok(qc(&qc(&p.z(tr)?, &p.t_big()?), &p.fx(true)).sub(&tail))
    })));
    rm1.push(("app.AppEqn5", "[B_(r-1),[B_r,[F_X^+,[B_tau(r),B_tau(r-1)]_q]_q]_q]_q = [[B_(r-1),[B_r,[F_X^+,B_tau(r)]_q]_q]_q, B_tau(r-1)]_q", Box::new(move |p| {
        let trm1 = p.datum.tau(r - 1);
        let lhs = qc(&p.b(r - 1)?, &qc(&p.b(r)?, &qc(&p.fx(true), &qc(&p.b(tr)?, &p.b(trm1)?))));
        let rhs = qc(&qc(&p.b(r - 1)?, &qc(&p.b(r)?, &qc(&p.fx(true), &p.b(tr)?))), &p.b(trm1)?);
        Ok(lhs.sub(&rhs))
    })));
    // Auxiliary identities used along the way.
    rm1.push(("app.aux.DeltaDeltat", "[Delta, Delta^tau] = (q c_r c_tau(r)/(q-q^-1)) K_X^2 Gamma_(r-1)", Box::new(move |p| {
        let coef = q().mul(&p.c(r)).mul(&p.c(tr)).mul(&inv_qmq());
        Ok(comm(&p.delta()?, &p.deltat()?).sub(&prod(vec![sc(coef), p.kx(2), p.gamma(r - 1)?])))
    })));
    rm1.push(("app.aux.SDelta", "S Delta = q^3 Delta S", Box::new(move |p| {
        Ok(p.s()?.mul(&p.delta()?).sub(&prod(vec![sc(qp(3)), p.delta()?, p.s()?])))
    })));
    rm1.push(("app.aux.ZrDelta", "Z_r Delta = q^-3 Delta Z_r", Box::new(move |p| {
        Ok(p.z(r)?.mul(&p.delta()?).sub(&prod(vec![sc(qp(-3)), p.delta()?, p.z(r)?])))
    })));
    rm1.push(("app.aux.SZtr", "c_tau(r) [S, Z_tau(r)]_q = -(q-q^-1)[Delta, B_r]", Box::new(move |p| {
        Ok(qc(&p.s()?, &p.z(tr)?).scaled(&p.c(tr)).add(&comm(&p.delta()?, &p.b(r)?).scaled(&FieldElem::q_minus_qinv())))
    })));
    rm1.push(("app.aux.DeltaBrBr", "[Delta, B_r] B_r = q^-2 B_r [Delta, B_r]", Box::new(move |p| {
        let x = comm(&p.delta()?, &p.b(r)?);
        Ok(x.mul(&p.b(r)?).sub(&prod(vec![sc(qp(-2)), p.b(r)?, x])))
    })));
    rm1.push(("app.aux.BrSBtr", "B_r [S,B_tau(r)]_q = [S,B_tau(r)]_q B_r + (q-q^-1)^-1 [S, Gamma_r]_q", Box::new(move |p| {
        let x = qc(&p.s()?, &p.b(tr)?);
        Ok(comm(&p.b(r)?, &x).sub(&qc(&p.s()?, &p.gamma(r)?).scaled(&inv_qmq())))
    })));
    rm1.push(("app.aux.Br-1Gammar", "[B_(r-1), Gamma_r]_q = (q^2-1) c_tau(r) B_(r-1) Z_tau(r)", Box::new(move |p| {
        let tail = prod(vec![sc(qp(2).sub(&FieldElem::one()).mul(&p.c(tr))), p.b(r - 1)?, p.z(tr)?]);
        Ok(qc(&p.b(r - 1)?, &p.gamma(r)?).sub(&tail))
    })));
    rm1.push(("app.aux.ctr-new", "ct_r(B_(r-1)) = C([S, B_tau(r)]_q + Delta)", Box::new(move |p| {
        let img = BMapHelper::apply(p, MapKind::Ct(r), &p.b(r - 1)?)?;
        Ok(img.sub(&qc(&p.s()?, &p.b(tr)?).add(&p.delta()?).scaled(&p.big_c())))
    })));
    rm1.push(("app.aux.ctr-alt", "ct_r(B_(r-1)) = C([[[B_(r-1),B_r]_q,F_X^+]_q,B_tau(r)]_q + q c_tau(r) B_(r-1) L_r K_X)", Box::new(move |p| {
        let img = BMapHelper::apply(p, MapKind::Ct(r), &p.b(r - 1)?)?;
        let x = qc(&qc(&qc(&p.b(r - 1)?, &p.b(r)?), &p.fx(true)), &p.b(tr)?);
        let tail = prod(vec![sc(q().mul(&p.c(tr))), p.b(r - 1)?, p.l(r)?, p.kx(1)]);
        Ok(img.sub(&x.add(&tail).scaled(&p.big_c())))
    })));
    rm1.push(("app.aux.ctrinv-new", "ct_r^-1(B_(r-1)) = C([B_tau(r), T]_q + Lambda)", Box::new(move |p| {
        let img = BMapHelper::apply(p, MapKind::CtInv(r), &p.b(r - 1)?)?;
        Ok(img.sub(&qc(&p.b(tr)?, &p.t_big()?).add(&p.lambda()?).scaled(&p.big_c())))
    })));
    // Relations used in the braid-relation proof.
    rm1.push(("app.AppEqn1", "[ct_(r-1)(B_(r-1)), [F_X^+, [B_tau(r), B_tau(r-1)]_q]_q] = 0", Box::new(move |p| {
        let trm1 = p.datum.tau(r - 1);
        let x = BMapHelper::apply(p, MapKind::Ct(r - 1), &p.b(r - 1)?)?;
        Ok(comm(&x, &qc(&p.fx(true), &qc(&p.b(tr)?, &p.b(trm1)?))))
    })));
    rm1.push(("app.AppEqn4", "ct_(r-1) ct_r ct_(r-1) ct_r (B_(r-1)) = ct_(r-1)(B_tau(r-1))", Box::new(move |p| {
        let trm1 = p.datum.tau(r - 1);
        let (a, b) = (MapKind::Ct(r - 1), MapKind::Ct(r));
        let lhs = BMapHelper::apply_seq(p, &[a, b, a, b], &p.b(r - 1)?)?;
        Ok(lhs.sub(&BMapHelper::apply(p, a, &p.b(trm1)?)?))
    })));
    rm1.push(("app.AppEqn4-step", "ct_(r-1) ct_r (B_(r-1)) = ct_r^-1(B_tau(r-1))", Box::new(move |p| {
        let trm1 = p.datum.tau(r - 1);
        let lhs = BMapHelper::apply_seq(p, &[MapKind::Ct(r - 1), MapKind::Ct(r)], &p.b(r - 1)?)?;
        Ok(lhs.sub(&BMapHelper::apply(p, MapKind::CtInv(r), &p.b(trm1)?)?))
    })));
    rm1.push(("app.AppEqn6", "[B_(r-1), ct_r^-1(B_tau(r-1))]_q = [ct_r(B_(r-1)), B_tau(r-1)]_q", Box::new(move |p| {
        let trm1 = p.datum.tau(r - 1);
        let lhs = qc(&p.b(r - 1)?, &BMapHelper::apply(p, MapKind::CtInv(r), &p.b(trm1)?)?);
        let rhs = qc(&BMapHelper::apply(p, MapKind::Ct(r), &p.b(r - 1)?)?, &p.b(trm1)?);
        Ok(lhs.sub(&rhs))
    })));
    rm1.push(("app.AppEqn8", "T_(r+1)(Y) = Y + q c_tau(r) B_(r-1) L_r (K_(r+1)^-1 - K_(r+1)) K_(X minus r+1)^-1", Box::new(move |p| {
        let y = qc(&p.b(r - 1)?, &qc(&p.b(r)?, &qc(&p.fx(true), &p.b(tr)?)));
        let lhs = t_word_expr(p.n(), &BraidWord::positive(&[r + 1]), &resolve(p, &y));
        let k_rest = x_minus_first(&p.datum);
        let kdiff = Expr::k(alpha(p.n(), r + 1).neg()).sub(&Expr::k(alpha(p.n(), r + 1)));
        let tail = prod(vec![sc(q().mul(&p.c(tr))), p.b(r - 1)?, p.l(r)?, kdiff, Expr::k(k_rest.neg())]);
        Ok(lhs.sub(&y).sub(&tail))
    })));
    rm1.push(("app.AppEqn8-torus", "T_(r+1)(B_(r-1) L_r K_X^-1) = B_(r-1) L_r K_(r+1) K_(X minus r+1)^-1", Box::new(move |p| {
        let x = prod(vec![p.b(r - 1)?, p.l(r)?, p.kx(-1)]);
        let lhs = t_word_expr(p.n(), &BraidWord::positive(&[r + 1]), &resolve(p, &x));
        let k_rest = x_minus_first(&p.datum);
        let rhs = prod(vec![p.b(r - 1)?, p.l(r)?, Expr::k(alpha(p.n(), r + 1)), Expr::k(k_rest.neg())]);
        Ok(lhs.sub(&rhs))
    })));
    for (id, anchor, build) in rm1 {
        if r >= 2 {
            let build = Arc::new(build);
            v.push(Check::zero(s, id, anchor, move |ctx| build(ctx.params(Family::Generic))));
        } else {
            v.push(Check::skipped(s, id, anchor, rm1_reason()));
        }
    }
    // The remaining identities with indices.
    v.push(Check::zero(s, "app.aux.BrGammar", "[B_r, Gamma_r]_(q^-2) = -(q^2-q^-2) c_tau(r) Z_tau(r) B_r", move |ctx| {
        let p = ctx.params(Family::Generic);
        let tail = prod(vec![sc(qp(2).sub(&qp(-2)).mul(&p.c(tr))), p.z(tr)?, p.b(r)?]);
        Ok(Expr::qc(&p.b(r)?, &p.gamma(r)?, qp(-2)).add(&tail))
    }));
    v.push(Check::zero(s, "app.aux.BrBrFX", "B_r [B_r, F_X^+]_q = q^-1 [B_r, F_X^+]_q B_r", move |ctx| {
        let p = ctx.params(Family::Generic);
        let x = qc(&p.b(r)?, &p.fx(true));
        Ok(p.b(r)?.mul(&x).sub(&prod(vec![sc(qp(-1)), x, p.b(r)?])))
    }));
    v.push(
        Check::zero(s, "app.aux.TwXZr", "T_wX(Z_r) = (1-q^-2) F_X^+ K_X L_tau(r)", move |ctx| {
            let p = ctx.params(Family::Generic);
            let lhs = t_word_expr(p.n(), &wx_of(&p.datum), &p.z(r)?);
            let rhs = prod(vec![sc(FieldElem::one().sub(&qp(-2))), p.fx(true), p.kx(1), p.l(tr)?]);
            Ok(lhs.sub(&rhs))
        })
        .with_nf(move |ctx| {
            let p = ctx.params(Family::Generic);
            let lhs = apply_t_word(&wx_of(&p.datum), &pbw_eval(p, &p.z(r)?)?)?;
            let rhs = prod(vec![sc(FieldElem::one().sub(&qp(-2))), p.fx(true), p.kx(1), p.l(tr)?]);
            Ok(lhs.sub(&pbw_eval(p, &rhs)?))
        }),
    );
    let inner_x: Vec<usize> = d.x_nodes().into_iter().filter(|&j| j != r + 1 && j != d.tau(r + 1)).collect();
    if inner_x.is_empty() {
        v.push(Check::skipped(s, "app.AppEqn7", "T_j(F_X^+) = F_X^+ for j in X minus {r+1, tau(r+1)}", "needs |X| ≥ 3"));
        v.push(Check::skipped(s, "app.aux.FX-commutes", "F_X^+ commutes with E_i, F_i for i in X minus {r+1, tau(r+1)}", "needs |X| ≥ 3"));
    }
    for j in inner_x {
        v.push(
            Check::zero(s, format!("app.AppEqn7[{j}]"), "T_j(F_X^+) = F_X^+ for j in X minus {r+1, tau(r+1)}", move |ctx| {
                let p = ctx.params(Family::Generic);
                Ok(t_word_expr(p.n(), &BraidWord::positive(&[j]), &p.fx(true)).sub(&p.fx(true)))
            })
            .with_nf(move |ctx| {
                let p = ctx.params(Family::Generic);
                let f = pbw_eval(p, &p.fx(true))?;
                Ok(apply_t(j, &f)?.sub(&f))
            }),
        );
        v.push(Check::zero(s, format!("app.aux.FX-commutes[{j}]"), "F_X^+ commutes with E_i, F_i for i in X minus {r+1, tau(r+1)}", move |ctx| {
            let p = ctx.params(Family::Generic);
            Ok(comm(&p.fx(true), &Expr::e(j)).add(&comm(&p.fx(true), &Expr::f(j))))
        }));
    }
    // AppEqn2/3 for every i outside X ∪ {r, τ(r)} and each neighbour.
    let mut any23 = false;
    for i in d.non_x_nodes() {
        if i == r || i == tr {
            continue;
        }
        for k in [i.wrapping_sub(1), i + 1] {
            if !(1..=n).contains(&k) {
                continue;
            }
            any23 = true;
            let ti = d.tau(i);
            v.push(Check::zero(s, format!("app.AppEqn2[{i},{k}]"), "[B_tau(i) L_tau(i), [B_(i+-1), B_i]_q]_q = q^2 c_i B_(i+-1)", move |ctx| {
                let p = ctx.params(Family::Generic);
                let x = p.b(ti)?.mul(&p.l(ti)?);
                Ok(qc(&x, &qc(&p.b(k)?, &p.b(i)?)).sub(&p.b(k)?.scaled(&qp(2).mul(&p.c(i)))))
            }));
            v.push(Check::zero(s, format!("app.AppEqn3[{i},{k}]"), "[[B_i, B_(i+-1)]_q, B_tau(i) L_i]_q = c_i B_(i+-1)", move |ctx| {
                let p = ctx.params(Family::Generic);
                let x = p.b(ti)?.mul(&p.l(i)?);
                Ok(qc(&qc(&p.b(i)?, &p.b(k)?), &x).sub(&p.b(k)?.scaled(&p.c(i))))
            }));
        }
    }
    if !any23 {
        v.push(Check::skipped(s, "app.AppEqn2", "[B_tau(i) L_tau(i), [B_(i+-1), B_i]_q]_q = q^2 c_i B_(i+-1)", "no node outside X ∪ {r, tau(r)}"));
        v.push(Check::skipped(s, "app.AppEqn3", "[[B_i, B_(i+-1)]_q, B_tau(i) L_i]_q = c_i B_(i+-1)", "no node outside X ∪ {r, tau(r)}"));
    }
    v
}

/// `Σ_{j ∈ X∖{r+1}} α_j` (the weight of `K_{X∖{r+1}}`).
fn x_minus_first(d: &SatakeDatum) -> Weight {
    let (a, b) = d.x_interval();
    if a == b {
        Weight::zero(d.n)
    } else {
        interval_root(d.n, a + 1, b)
    }
}

/// Apply maps over the parameter set a check is built from.
struct BMapHelper;

impl BMapHelper {
    fn apply(p: &Params, kind: MapKind, e: &Expr) -> Result<Expr, CheckError> {
        BMapHelper::apply_seq(p, &[kind], e)
    }

    fn apply_seq(p: &Params, kinds: &[MapKind], e: &Expr) -> Result<Expr, CheckError> {
        let maps: Vec<crate::braidaction::BMap> = kinds.iter().map(|k| crate::braidaction::BMap::new(*k, p)).collect::<Result<_, _>>()?;
        let refs: Vec<&crate::braidaction::BMap> = maps.iter().collect();
        Ok(crate::braidaction::apply_composite(&refs, e)?)
    }
}

// ---------------------------------------------------------------------------
// Running
// ---------------------------------------------------------------------------

/// Runner configuration.
#[derive(Debug, Clone, Copy)]
pub struct RunConfig {
    pub oracles: Oracles,
    pub max_degree: Option<usize>,
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            oracles: Oracles::PBW,
            max_degree: None,
            jobs: 0,
        }
    }
}

static QUIET_RESOURCE_PANICS: Once = Once::new();

/// Resource-limit unwinds are part of normal operation; keep them off stderr.
fn install_panic_filter() {
    QUIET_RESOURCE_PANICS.call_once(|| {
        let prev = std::panic::take_hook();
        std::panic::set_hook(Box::new(move |info| {
            if info.payload().downcast_ref::<ResourceLimit>().is_none() {
                prev(info);
            }
        }));
    });
}

enum Verdict {
    Zero,
    Nonzero(String),
    Error(String),
    Resource(String),
}

fn guarded<T>(max_degree: Option<usize>, f: impl FnOnce() -> Result<T, CheckError>) -> Result<T, Verdict> {
    match catch_unwind(AssertUnwindSafe(|| with_max_degree(max_degree, f))) {
        Ok(Ok(x)) => Ok(x),
        Ok(Err(e)) => Err(Verdict::Error(e.to_string())),
        Err(payload) => match payload.downcast_ref::<ResourceLimit>() {
            Some(l) => Err(Verdict::Resource(format!("degree bound {} exceeded (reached {})", l.bound, l.reached))),
            None => std::panic::resume_unwind(payload),
        },
    }
}

const WITNESS_TERMS: usize = 6;

/// Run one check.
pub fn run_check(check: &Check, ctx: &Ctx, cfg: &RunConfig) -> CheckReport {
    install_panic_filter();
    let start = Instant::now();
    let mut oracles = BTreeMap::new();
    let report = |status: Status, witness: Option<String>, oracles: BTreeMap<String, String>| CheckReport {
        check_id: check.id.clone(),
        suite: check.suite.name(),
        paper_anchor: check.anchor.clone(),
        status,
        elapsed_ms: start.elapsed().as_millis() as u64,
        witness,
        oracles,
    };
    let (build, nf) = match &check.body {
        Body::Skipped(reason) => return report(Status::Skipped, None, BTreeMap::from([("note".to_string(), reason.clone())])),
        Body::Zero { build, nf } => (build, nf),
    };
    let expr = match guarded(cfg.max_degree, || build(ctx)) {
        Ok(e) => e,
        Err(Verdict::Error(e)) => return report(Status::Fail, Some(format!("error: {e}")), oracles),
        Err(Verdict::Resource(e)) => return report(Status::ResourceSkip, None, BTreeMap::from([("note".to_string(), e)])),
        Err(_) => unreachable!(),
    };
    let p = ctx.params(check.family);
    let n = ctx.n();
    let mut verdicts: Vec<(String, Verdict)> = Vec::new();
    if cfg.oracles.pbw {
        let v = guarded(cfg.max_degree, || match nf {
            Some(f) => f(ctx),
            None => pbw_eval(p, &expr),
        });
        verdicts.push(("pbw".into(), match v {
            Ok(x) if x.is_zero() => Verdict::Zero,
            Ok(x) => Verdict::Nonzero(x.render_truncated(WITNESS_TERMS)),
            Err(v) => v,
        }));
    }
    if cfg.oracles.elim {
        let v = guarded(cfg.max_degree, || Ok(p.evaluate(&Elim::new(n), &expr)?));
        verdicts.push(("elim".into(), match v {
            Ok(x) if x.is_zero() => Verdict::Zero,
            Ok(x) => Verdict::Nonzero(format!("nonzero in the elimination engine ({} terms)", x.len())),
            Err(v) => v,
        }));
    }
    if cfg.oracles.rep {
        for power in [1u32, 2] {
            let v = guarded(cfg.max_degree, || {
                let alg = RepAlgebra::new(n, power)?;
                Ok(p.evaluate(&alg, &expr)?)
            });
            verdicts.push((format!("rep{power}"), match v {
                Ok(x) if x.is_zero() => Verdict::Zero,
                Ok(x) => Verdict::Nonzero(format!("nonzero on V^{power} ({} entries)", x.nnz())),
                Err(v) => v,
            }));
        }
    }
    let mut status = Status::Pass;
    let mut witness = None;
    for (name, v) in verdicts {
        let text = match v {
            Verdict::Zero => "zero".to_string(),
            Verdict::Nonzero(w) => {
                status = Status::Fail;
                witness.get_or_insert(format!("{name}: {w}"));
                "nonzero".to_string()
            }
            Verdict::Error(e) => {
                status = Status::Fail;
                witness.get_or_insert(format!("{name}: error: {e}"));
                "error".to_string()
            }
            Verdict::Resource(e) => {
                if status == Status::Pass {
                    status = Status::ResourceSkip;
                }
                format!("resource-skip: {e}")
            }
        };
        oracles.insert(name, text);
    }
    report(status, witness, oracles)
}

/// Run a list of checks in parallel; reports come back sorted by check id.
pub fn run_checks(checks: &[Check], ctx: &Ctx, cfg: &RunConfig) -> Vec<CheckReport> {
    let run = || -> Vec<CheckReport> { checks.par_iter().map(|c| run_check(c, ctx, cfg)).collect() };
    let mut out = if cfg.jobs > 0 {
        match rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        }
    } else {
        run()
    };
    out.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    out
}

/// Run whole suites, in dependency order.
pub fn run_suites(d: &SatakeDatum, suites: &[Suite], cfg: &RunConfig) -> Vec<CheckReport> {
    let ctx = Ctx::new(*d);
    let mut out = Vec::new();
    let mut sorted = suites.to_vec();
    sorted.sort();
    sorted.dedup();
    for s in sorted {
        let checks = suite_checks(s, d);
        out.extend(run_checks(&checks, &ctx, cfg));
    }
    out
}

#[cfg(test)]
mod tests {
    use crate::rootdata::longest_word;
    use super::*;

    #[test]
    fn alternative_words_are_reduced_and_distinct() {
        let d = SatakeDatum::new(6, 2).unwrap();
        let w = d.wx_word();
        for alt in alternative_reduced_words(6, &w) {
            assert_eq!(alt.len(), w.len());
            assert_ne!(alt, w);
        }
        assert_eq!(longest_word(6, &[3, 4]).unwrap().len(), 3);
    }

    #[test]
    fn small_suites_pass() {
        let d = SatakeDatum::new(3, 1).unwrap();
        for s in [Suite::UqDefining, Suite::QspDefining, Suite::Lusztig] {
            for rep in run_suites(&d, &[s], &RunConfig::default()) {
                assert_ne!(rep.status, Status::Fail, "{} {:?}", rep.check_id, rep.witness);
            }
        }
    }
}
