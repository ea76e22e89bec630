//! Braid-group maps on the coideal side.
//!
//! A [`BMap`] acts on coideal expressions generator by generator: `B[j]`
//! leaves get the printed images, generators of `M_X` and torus elements
//! `K_μ` (μ fixed by `−w_X∘τ`) are moved by the relevant Lusztig word,
//! and the result is again a coideal expression.  The maps are never
//! applied to raw U_q elements — the Lusztig composites `T̃_i` do not
//! preserve B_c, only their restrictions to `M_X U_Θ^0` are used.
//!
//! Images of `M_X` generators are computed in normal form, checked to be
//! supported on `M_X U_Θ^0`, and converted back into expressions built from
//! root vectors; these conversions are memoized per datum.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock};

use num_rational::Rational64;
use num_traits::{One, Zero};
use parking_lot::{Mutex, RwLock};
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::coeffield::{FieldElem, ZETA};
use crate::expr::{Atom, Expr, Transform};
use crate::lusztig::{apply_t_word, letter_image, BraidError, BraidWord, Letter};
use crate::qsp::{eta_of, nested, zeta_of, zeta_root_order, Family, Params, QspError};
use crate::rootdata::{cartan_unchecked, reflect_word, SatakeDatum, Weight};
use crate::uqcore::pbw::PbwEngine;
use crate::uqcore::NormalElement;

/// Errors raised while building or applying a map.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MapError {
    #[error(transparent)]
    Qsp(#[from] QspError),
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error("{0} is not a generator of the coideal subalgebra")]
    NotCoideal(String),
    #[error("image of {0} under {1} leaves M_X U_Θ^0")]
    LeavesMx(String, String),
    #[error("index {0} is not valid for {1}")]
    BadIndex(usize, &'static str),
    #[error("φ requires the symmetric parameter family (c_r = c_τ(r)); got {0}")]
    NeedsSymmetric(&'static str),
    #[error("the torus character of A at K[{0}] is not a power of the ζ root in use")]
    NonIntegralCharacter(String),
}

/// The maps acting on coideal expressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MapKind {
    /// The automorphism attached to the restricted simple reflection `σ̃_i`.
    Ct(usize),
    CtInv(usize),
    /// The anti-involution φ.
    Phi,
    /// Lusztig's `T_j`, `j ∈ X`, restricted to the coideal.
    T(usize),
    TInv(usize),
    /// `T_{w_X}` and its inverse, restricted to the coideal.
    TwX,
    TwXInv,
    /// The reparametrization `A_{η,ζ}` from `c` to `c'` and its inverse.
    A,
    AInv,
    /// The rescaling `f` of `B_r`, `B_{τ(r)}`.
    F,
}

impl MapKind {
    pub fn name(&self) -> String {
        match self {
            MapKind::Ct(i) => format!("ct[{i}]"),
            MapKind::CtInv(i) => format!("ctinv[{i}]"),
            MapKind::Phi => "phi".into(),
            MapKind::T(j) => format!("T[{j}]"),
            MapKind::TInv(j) => format!("Tinv[{j}]"),
            MapKind::TwX => "TwX".into(),
            MapKind::TwXInv => "TwXinv".into(),
            MapKind::A => "A".into(),
            MapKind::AInv => "Ainv".into(),
            MapKind::F => "f".into(),
        }
    }
}

/// A map acting generator-wise on coideal expressions.
pub struct BMap {
    pub kind: MapKind,
    params: Params,
    word: Option<BraidWord>,
    images: Mutex<FxHashMap<Atom, Expr>>,
}

impl BMap {
    pub fn new(kind: MapKind, params: &Params) -> Result<BMap, MapError> {
        let d = params.datum;
        let word = match kind {
            MapKind::Ct(i) | MapKind::CtInv(i) => {
                if !(1..=d.r).contains(&i) {
                    return Err(MapError::BadIndex(i, "ct (1 ≤ i ≤ r)"));
                }
                let w = BraidWord::positive(&d.restricted_word(i));
                Some(if matches!(kind, MapKind::Ct(_)) { w } else { w.inverse() })
            }
            MapKind::T(j) | MapKind::TInv(j) => {
                if !d.in_x(j) {
                    return Err(MapError::BadIndex(j, "T on the coideal (j ∈ X)"));
                }
                let w = BraidWord::positive(&[j]);
                Some(if matches!(kind, MapKind::T(_)) { w } else { w.inverse() })
            }
            MapKind::TwX => Some(BraidWord::positive(&d.wx_word())),
            MapKind::TwXInv => Some(BraidWord::positive(&d.wx_word()).inverse()),
            MapKind::Phi => {
                if params.family != Family::Symmetric {
                    return Err(MapError::NeedsSymmetric(params.family.name()));
                }
                None
            }
            MapKind::A | MapKind::AInv | MapKind::F => None,
        };
        Ok(BMap {
            kind,
            params: params.clone(),
            word,
            images: Mutex::new(FxHashMap::default()),
        })
    }

    pub fn name(&self) -> String {
        self.kind.name()
    }

    fn datum(&self) -> SatakeDatum {
        self.params.datum
    }

    /// Image of a single leaf.
    pub fn image(&self, a: &Atom) -> Result<Expr, MapError> {
        if let Some(hit) = self.images.lock().get(a) {
            return Ok(hit.clone());
        }
        let img = self.compute_image(a)?;
        self.images.lock().insert(a.clone(), img.clone());
        Ok(img)
    }

    fn compute_image(&self, a: &Atom) -> Result<Expr, MapError> {
        let d = self.datum();
        match a {
            Atom::B(j) => {
                if !(1..=d.n).contains(j) {
                    return Err(MapError::NotCoideal(format!("B[{j}]")));
                }
                if d.in_x(*j) {
                    return self.image(&Atom::F(*j));
                }
                self.b_image(*j)
            }
            Atom::E(j) | Atom::F(j) => {
                if !d.in_x(*j) {
                    return Err(MapError::NotCoideal(render_atom(a)));
                }
                self.mx_image(a)
            }
            Atom::K(mu) => {
                if !d.theta_fixed(mu) {
                    return Err(MapError::NotCoideal(render_atom(a)));
                }
                self.k_image(mu)
            }
        }
    }

    fn k_image(&self, mu: &Weight) -> Result<Expr, MapError> {
        let d = self.datum();
        Ok(match self.kind {
            MapKind::Phi => Expr::k(mu.neg()),
            MapKind::A | MapKind::AInv => {
                let e = torus_exponent(&d, mu)? * Rational64::from_integer(zeta_root_order(&d) as i64);
                if !e.is_integer() {
                    return Err(MapError::NonIntegralCharacter(mu.to_string()));
                }
                let e = e.to_integer() as i16;
                let e = if self.kind == MapKind::A { e } else { -e };
                let z = FieldElem::monomial(ZETA, e, 1);
                Expr::scale(z, Expr::k(mu.clone()))
            }
            MapKind::F => Expr::k(mu.clone()),
            _ => {
                let w = self.word.as_ref().unwrap();
                Expr::k(w.act_weight(mu))
            }
        })
    }

    fn mx_image(&self, a: &Atom) -> Result<Expr, MapError> {
        let d = self.datum();
        match self.kind {
            MapKind::Phi | MapKind::A | MapKind::AInv | MapKind::F => Ok(Expr::atom(a.clone())),
            MapKind::T(_) | MapKind::TInv(_) => {
                let l = self.word.as_ref().unwrap().letters[0];
                Ok(letter_image(d.n, l, a).unwrap_or_else(|| Expr::atom(a.clone())))
            }
            _ => mx_word_image(&d, self.word.as_ref().unwrap(), a, &self.name()),
        }
    }

    fn b_image(&self, j: usize) -> Result<Expr, MapError> {
        let p = &self.params;
        let d = self.datum();
        let q = FieldElem::q();
        let qi = FieldElem::q_pow(-1);
        let b = |k: usize| p.b(k);
        let qc = |x: &Expr, y: &Expr| Expr::qc(x, y, q.clone());
        Ok(match self.kind {
            MapKind::Ct(i) if i < d.r => {
                let ti = d.tau(i);
                if j == i || j == ti {
                    Expr::prod(vec![Expr::scalar(qi), b(d.tau(j))?, p.l(d.tau(j))?])
                } else if cartan_unchecked(i, j) == -1 {
                    qc(&b(j)?, &b(i)?).scaled(&p.qc_inv_sqrt(i)?)
                } else if cartan_unchecked(ti, j) == -1 {
                    qc(&b(j)?, &b(ti)?).scaled(&p.qc_inv_sqrt(ti)?)
                } else {
                    b(j)?
                }
            }
            MapKind::CtInv(i) if i < d.r => {
                let ti = d.tau(i);
                if j == i || j == ti {
                    Expr::prod(vec![Expr::scalar(q.clone()), b(d.tau(j))?, p.l(j)?])
                } else if cartan_unchecked(i, j) == -1 {
                    qc(&b(i)?, &b(j)?).scaled(&p.qc_inv_sqrt(i)?)
                } else if cartan_unchecked(ti, j) == -1 {
                    qc(&b(ti)?, &b(j)?).scaled(&p.qc_inv_sqrt(ti)?)
                } else {
                    b(j)?
                }
            }
            MapKind::Ct(_) => {
                let (r, tr) = (d.r, d.tr());
                if j == r {
                    Expr::prod(vec![Expr::scalar(qi), b(r)?, p.l(r)?, p.k_varpi_prime(r + 1)])
                } else if j == tr {
                    Expr::prod(vec![Expr::scalar(qi), b(tr)?, p.l(tr)?, p.k_varpi_prime(d.tau(r + 1))])
                } else if r >= 2 && j == r - 1 {
                    let inner = qc(&b(r)?, &qc(&p.fx(true), &b(tr)?));
                    let tail = Expr::prod(vec![Expr::scalar(q.mul(&p.c(tr))), b(r - 1)?, p.l(r)?, p.kx(-1)]);
                    qc(&b(r - 1)?, &inner).add(&tail).scaled(&p.big_c())
                } else if r >= 2 && j == d.tau(r - 1) {
                    let trm1 = d.tau(r - 1);
                    let inner = qc(&b(tr)?, &qc(&p.fx(false), &b(r)?));
                    let tail = Expr::prod(vec![Expr::scalar(q.mul(&p.c(r))), b(trm1)?, p.l(tr)?, p.kx(-1)]);
                    qc(&b(trm1)?, &inner).add(&tail).scaled(&p.big_c())
                } else {
                    b(j)?
                }
            }
            MapKind::CtInv(_) => {
                let (r, tr) = (d.r, d.tr());
                if j == r {
                    Expr::prod(vec![Expr::scalar(q.clone()), b(r)?, p.l(tr)?, p.k_varpi_prime(d.tau(r + 1))])
                } else if j == tr {
                    Expr::prod(vec![Expr::scalar(q.clone()), b(tr)?, p.l(r)?, p.k_varpi_prime(r + 1)])
                } else if r >= 2 && j == r - 1 {
                    let inner = qc(&p.fx(false), &qc(&b(r)?, &b(r - 1)?));
                    let tail = Expr::prod(vec![Expr::scalar(p.c(r)), b(r - 1)?, p.l(tr)?, p.kx(-1)]);
                    qc(&b(tr)?, &inner).add(&tail).scaled(&p.big_c())
                } else if r >= 2 && j == d.tau(r - 1) {
                    let trm1 = d.tau(r - 1);
                    let inner = qc(&p.fx(true), &qc(&b(tr)?, &b(trm1)?));
                    let tail = Expr::prod(vec![Expr::scalar(p.c(tr)), b(trm1)?, p.l(r)?, p.kx(-1)]);
                    qc(&b(r)?, &inner).add(&tail).scaled(&p.big_c())
                } else {
                    b(j)?
                }
            }
            MapKind::Phi => b(j)?,
            MapKind::T(x) => {
                if cartan_unchecked(x, j) == -1 {
                    qc(&b(j)?, &Expr::f(x))
                } else {
                    b(j)?
                }
            }
            MapKind::TInv(x) => {
                if cartan_unchecked(x, j) == -1 {
                    qc(&Expr::f(x), &b(j)?)
                } else {
                    b(j)?
                }
            }
            MapKind::TwX => {
                if j == d.r {
                    qc(&b(j)?, &p.fx(true))
                } else if j == d.tr() {
                    qc(&b(j)?, &p.fx(false))
                } else {
                    b(j)?
                }
            }
            MapKind::TwXInv => {
                if j == d.r {
                    qc(&p.fx(false), &b(j)?)
                } else if j == d.tr() {
                    qc(&p.fx(true), &b(j)?)
                } else {
                    b(j)?
                }
            }
            MapKind::A => Expr::scale(eta_of(j).inv().unwrap(), b(j)?),
            MapKind::AInv => Expr::scale(eta_of(j), b(j)?),
            MapKind::F => Expr::scale(zeta_of(&d, j).inv().unwrap(), b(j)?),
        })
    }

    /// Apply the map to a coideal expression.
    pub fn apply(&self, e: &Expr) -> Result<Expr, MapError> {
        let err: Mutex<Option<MapError>> = Mutex::new(None);
        let f = |a: &Atom| -> Option<Expr> {
            match self.image(a) {
                Ok(x) => Some(x),
                Err(e) => {
                    err.lock().get_or_insert(e);
                    Some(Expr::zero())
                }
            }
        };
        let out = Transform {
            atom: &f,
            coeff: None,
            reverse: self.kind == MapKind::Phi,
        }
        .apply(e);
        match err.into_inner() {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }
}

/// Apply a composite `m_1 ∘ m_2 ∘ … ∘ m_k` (the rightmost map acts first).
pub fn apply_composite(maps: &[&BMap], e: &Expr) -> Result<Expr, MapError> {
    let mut cur = e.clone();
    for m in maps.iter().rev() {
        cur = m.apply(&cur)?;
    }
    Ok(cur)
}

fn render_atom(a: &Atom) -> String {
    Expr::atom(a.clone()).render()
}

// ---------------------------------------------------------------------------
// M_X images
// ---------------------------------------------------------------------------

type MxKey = (usize, usize, Vec<(usize, bool)>, Atom);

static MX_IMAGES: LazyLock<RwLock<HashMap<MxKey, Expr>>> = LazyLock::new(|| RwLock::new(HashMap::new()));

fn mx_word_image(d: &SatakeDatum, w: &BraidWord, a: &Atom, name: &str) -> Result<Expr, MapError> {
    let key: MxKey = (d.n, d.r, w.letters.iter().map(|l| (l.node, l.inverse)).collect(), a.clone());
    if let Some(hit) = MX_IMAGES.read().get(&key) {
        return Ok(hit.clone());
    }
    let n = d.n;
    let x = match a {
        Atom::E(j) => NormalElement::gen_e(n, *j),
        Atom::F(j) => NormalElement::gen_f(n, *j),
        _ => unreachable!("torus leaves are handled by weights"),
    };
    let img = apply_t_word(w, &x)?;
    let (lo, hi) = d.x_interval();
    if !img.supported_on(lo, hi, |mu| d.theta_fixed(mu)) {
        return Err(MapError::LeavesMx(render_atom(a), name.to_string()));
    }
    let e = normal_to_expr(&img);
    MX_IMAGES.write().insert(key, e.clone());
    Ok(e)
}

/// Re-express a normal form as an expression over root vectors, which are
/// written as iterated brackets of simple generators.
pub fn normal_to_expr(x: &NormalElement) -> Expr {
    let n = x.rank();
    let eng = PbwEngine::get(n);
    let mut cache: FxHashMap<(bool, u8), Expr> = FxHashMap::default();
    let mut root = |is_e: bool, k: u8| -> Expr {
        cache
            .entry((is_e, k))
            .or_insert_with(|| {
                let (a, b) = eng.root(k);
                if is_e {
                    nested(a, b, true, FieldElem::q_pow(-1), Expr::e)
                } else {
                    nested(a, b, true, FieldElem::q(), Expr::f)
                }
            })
            .clone()
    };
    let mut terms = Vec::new();
    for (m, c) in x.terms() {
        let mut factors = vec![Expr::scalar(c.clone())];
        factors.extend(m.f.iter().map(|k| root(false, *k)));
        if !m.k.is_zero() {
            factors.push(Expr::k(m.k.clone()));
        }
        factors.extend(m.e.iter().map(|k| root(true, *k)));
        terms.push(Expr::prod(factors));
    }
    Expr::sum(terms)
}

/// The restricted Lusztig word `T̃_i` as a braid word.
pub fn restricted_braid(d: &SatakeDatum, i: usize) -> BraidWord {
    BraidWord::positive(&d.restricted_word(i))
}

/// `T̃_i` applied to a Θ-fixed weight.
pub fn restricted_weight(d: &SatakeDatum, i: usize, mu: &Weight) -> Weight {
    reflect_word(&d.restricted_word(i), mu)
}

/// A single letter as a word.
pub fn letter_word(node: usize, inverse: bool) -> BraidWord {
    BraidWord {
        letters: vec![Letter { node, inverse }],
    }
}

// ---------------------------------------------------------------------------
// Torus character of the reparametrization map
// ---------------------------------------------------------------------------

/// The exponent `e(μ)` with `A(K_μ) = ζ_r^{e(μ)} K_μ`.
///
/// A fixes the semisimple part: `K_j` and `K_{ϖ_j}` for `j ∈ X`, so any μ in
/// the ℚ-span of those weights gets exponent 0.  Other torus weights are
/// expanded over `α_j` (`j ∈ X`) and `L_i` (`i ≤ r`), using
/// `A(L_i) = ζ_i^{-1} L_i`; the exponent may be fractional (the map lives
/// over a field containing roots of `ζ_r`).  The two
/// prescriptions are not jointly a character of the Θ-fixed lattice once
/// `|X| > 1`, so the first one takes precedence for weights it covers.
pub fn torus_exponent(d: &SatakeDatum, mu: &Weight) -> Result<Rational64, MapError> {
    let n = d.n;
    let mut semisimple: Vec<Weight> = d.x_nodes().into_iter().map(|j| crate::rootdata::alpha(n, j)).collect();
    semisimple.extend(d.x_nodes().into_iter().map(|j| crate::rootdata::varpi(n, j)));
    if solve_rational(&semisimple, mu).is_some() {
        return Ok(Rational64::zero());
    }
    let mut gens: Vec<(Weight, i64)> = d.x_nodes().into_iter().map(|j| (crate::rootdata::alpha(n, j), 0)).collect();
    for i in 1..=d.r {
        let e = if i == d.r { -1 } else { 0 };
        gens.push((d.l_weight(i), e));
    }
    let coeffs = solve_rational(&gens.iter().map(|(w, _)| w.clone()).collect::<Vec<_>>(), mu)
        .ok_or_else(|| MapError::NonIntegralCharacter(mu.to_string()))?;
    let mut total = Rational64::zero();
    for (x, (_, e)) in coeffs.iter().zip(&gens) {
        total += *x * Rational64::from_integer(*e);
    }
    Ok(total)
}

/// Solve `Σ x_k g_k = μ` over ℚ (generators assumed linearly independent).
fn solve_rational(gens: &[Weight], mu: &Weight) -> Option<Vec<Rational64>> {
    let rows = mu.rank();
    let cols = gens.len();
    let mut m: Vec<Vec<Rational64>> = (0..rows)
        .map(|i| {
            let mut row: Vec<Rational64> = gens.iter().map(|g| Rational64::from_integer(g.coords()[i] as i64)).collect();
            row.push(Rational64::from_integer(mu.coords()[i] as i64));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = Rational64::one() / m[row][col];
        for x in m[row].iter_mut() {
            *x *= inv;
        }
        let pivot = m[row].clone();
        for (i, line) in m.iter_mut().enumerate() {
            if i != row && !line[col].is_zero() {
                let f = line[col];
                for (x, p) in line.iter_mut().zip(&pivot) {
                    *x -= f * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if m[row..].iter().any(|r| !r[cols].is_zero()) {
        return None;
    }
    let mut x = vec![Rational64::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols];
    }
    Some(x)
}

/// Shared handle for a family of maps over one parameter set.
pub struct MapSet {
    pub params: Params,
    cache: Mutex<FxHashMap<MapKind, Arc<BMap>>>,
}

impl MapSet {
    pub fn new(params: Params) -> MapSet {
        MapSet {
            params,
            cache: Mutex::new(FxHashMap::default()),
        }
    }

    pub fn get(&self, kind: MapKind) -> Result<Arc<BMap>, MapError> {
        if let Some(hit) = self.cache.lock().get(&kind) {
            return Ok(hit.clone());
        }
        let m = Arc::new(BMap::new(kind, &self.params)?);
        self.cache.lock().insert(kind, m.clone());
        Ok(m)
    }

    /// Apply a composite given as a list of kinds, rightmost first.
    pub fn apply(&self, kinds: &[MapKind], e: &Expr) -> Result<Expr, MapError> {
        let maps: Vec<Arc<BMap>> = kinds.iter().map(|k| self.get(*k)).collect::<Result<_, _>>()?;
        let refs: Vec<&BMap> = maps.iter().map(|m| m.as_ref()).collect();
        apply_composite(&refs, e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::uqcore::Pbw;

    fn zero(p: &Params, e: &Expr) -> bool {
        p.evaluate(&Pbw { n: p.n() }, e).unwrap().is_zero()
    }

    #[test]
    fn ct_r_on_b_r_matches_printed_image() {
        let p = Params::generic(SatakeDatum::new(5, 2).unwrap());
        let m = BMap::new(MapKind::Ct(2), &p).unwrap();
        let img = m.apply(&Expr::b(2)).unwrap();
        let expect = Expr::prod(vec![Expr::scalar(FieldElem::q_pow(-1)), Expr::b(2), p.l(2).unwrap(), p.k_varpi_prime(3)]);
        assert!(zero(&p, &img.sub(&expect)));
        assert_eq!(m.apply(&Expr::int(5)).unwrap(), Expr::int(5));
    }

    #[test]
    fn ct_and_inverse_compose_to_identity_small() {
        let p = Params::generic(SatakeDatum::new(5, 2).unwrap());
        let set = MapSet::new(p.clone());
        for i in 1..=2 {
            for j in 1..=5 {
                let x = p.b(j).unwrap();
                let y = set.apply(&[MapKind::Ct(i), MapKind::CtInv(i)], &x).unwrap();
                assert!(zero(&p, &y.sub(&x)), "ct[{i}]ctinv[{i}] on B[{j}]");
                let y = set.apply(&[MapKind::CtInv(i), MapKind::Ct(i)], &x).unwrap();
                assert!(zero(&p, &y.sub(&x)), "ctinv[{i}]ct[{i}] on B[{j}]");
            }
        }
    }

    #[test]
    fn restricted_word_preserves_mx() {
        let d = SatakeDatum::new(6, 2).unwrap();
        let p = Params::generic(d);
        let m = BMap::new(MapKind::Ct(2), &p).unwrap();
        for j in d.x_nodes() {
            m.apply(&Expr::e(j)).unwrap();
            m.apply(&Expr::f(j)).unwrap();
        }
        assert!(matches!(m.apply(&Expr::e(1)), Err(MapError::NotCoideal(_))));
    }

    #[test]
    fn phi_needs_symmetric_family() {
        let d = SatakeDatum::new(5, 2).unwrap();
        assert!(BMap::new(MapKind::Phi, &Params::generic(d)).is_err());
        assert!(BMap::new(MapKind::Phi, &Params::symmetric(d)).is_ok());
    }

    #[test]
    fn torus_character_values() {
        let d = SatakeDatum::new(6, 2).unwrap();
        let z = |k: i64| Rational64::from_integer(k);
        assert_eq!(torus_exponent(&d, &d.l_weight(2)).unwrap(), z(-1));
        assert_eq!(torus_exponent(&d, &d.l_weight(5)).unwrap(), z(1));
        assert_eq!(torus_exponent(&d, &d.kx_weight()).unwrap(), z(0));
        assert_eq!(torus_exponent(&d, &d.l_weight(1)).unwrap(), z(0));
        assert_eq!(torus_exponent(&d, &d.varpi_prime(4)).unwrap(), z(0));
        let d31 = SatakeDatum::new(3, 1).unwrap();
        assert_eq!(torus_exponent(&d31, &d31.varpi_prime(1)).unwrap(), Rational64::new(-1, 2));
    }
}
