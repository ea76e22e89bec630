//! Lusztig's braid group automorphisms T_i of U_q(sl_{n+1}).
//!
//! Conventions:
//!
//! ```text
//!   T_i(E_i) = −F_i K_i            T_i^{-1}(E_i) = −K_i^{-1} F_i
//!   T_i(F_i) = −K_i^{-1} E_i       T_i^{-1}(F_i) = −E_i K_i
//!   T_i(E_j) = [E_i, E_j]_{q^-1}   T_i^{-1}(E_j) = [E_j, E_i]_{q^-1}   (a_ij = −1)
//!   T_i(F_j) = [F_j, F_i]_q        T_i^{-1}(F_j) = [F_i, F_j]_q        (a_ij = −1)
//!   T_i^{±1}(K_μ) = K_{σ_i(μ)}
//! ```
//!
//! and generators with a_ij = 0 are fixed.  The inverse images are checked
//! against the forward ones by composition in the test suite.
//!
//! A word `T_w = T_{i1} T_{i2} ⋯ T_{it}` acts with the rightmost letter
//! first.  On normal forms, each PBW monomial is expanded into root
//! vectors whose images are memoized per (rank, letter, root).

use std::collections::HashMap;
use std::sync::{Arc, LazyLock};

use parking_lot::RwLock;
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::coeffield::FieldElem;
use crate::expr::{Atom, Expr, Transform};
use crate::rootdata::{alpha, cartan_unchecked, reflect_unchecked, Weight};
use crate::uqcore::pbw::{PbwEngine, RootIdx};
use crate::uqcore::{NormalElement, Side};

/// Errors from braid-group operations.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum BraidError {
    #[error("node {0} out of range for rank {1}")]
    IndexRange(usize, usize),
}

/// One letter T_i^{±1} of a braid word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub node: usize,
    pub inverse: bool,
}

/// A braid word `T_{i1}^{±1} ⋯ T_{it}^{±1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BraidWord {
    pub letters: Vec<Letter>,
}

impl BraidWord {
    pub fn new() -> BraidWord {
        BraidWord::default()
    }

    /// `T_{i1} ⋯ T_{it}` for a node sequence.
    pub fn positive(nodes: &[usize]) -> BraidWord {
        BraidWord {
            letters: nodes.iter().map(|&node| Letter { node, inverse: false }).collect(),
        }
    }

    /// The inverse word `T_{it}^{-1} ⋯ T_{i1}^{-1}`.
    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter {
                    node: l.node,
                    inverse: !l.inverse,
                })
                .collect(),
        }
    }

    /// Concatenation `self · other` (other acts first).
    pub fn then(&self, other: &BraidWord) -> BraidWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        BraidWord { letters }
    }

    pub fn validate(&self, n: usize) -> Result<(), BraidError> {
        for l in &self.letters {
            if !(1..=n).contains(&l.node) {
                return Err(BraidError::IndexRange(l.node, n));
            }
        }
        Ok(())
    }

    /// Action on weights: σ_{i1} ⋯ σ_{it}(μ).
    pub fn act_weight(&self, mu: &Weight) -> Weight {
        let mut w = mu.clone();
        for l in self.letters.iter().rev() {
            w = reflect_unchecked(l.node, &w);
        }
        w
    }
}

// ---------------------------------------------------------------------------
// Generator images as expressions
// ---------------------------------------------------------------------------

/// Image of one generator atom under a single letter.
pub fn letter_image(n: usize, l: Letter, a: &Atom) -> Option<Expr> {
    let i = l.node;
    let ki = Expr::k(alpha(n, i));
    let ki_inv = Expr::k(alpha(n, i).neg());
    let q = FieldElem::q();
    let qi = FieldElem::q_pow(-1);
    Some(match (a, l.inverse) {
        (Atom::K(mu), _) => Expr::k(reflect_unchecked(i, mu)),
        (Atom::E(j), false) if *j == i => Expr::prod(vec![Expr::f(i), ki]).neg(),
        (Atom::F(j), false) if *j == i => Expr::prod(vec![ki_inv, Expr::e(i)]).neg(),
        (Atom::E(j), true) if *j == i => Expr::prod(vec![ki_inv, Expr::f(i)]).neg(),
        (Atom::F(j), true) if *j == i => Expr::prod(vec![Expr::e(i), ki]).neg(),
        (Atom::E(j), inv) if cartan_unchecked(i, *j) == -1 => {
            if inv {
                Expr::qc(&Expr::e(*j), &Expr::e(i), qi)
            } else {
                Expr::qc(&Expr::e(i), &Expr::e(*j), qi)
            }
        }
        (Atom::F(j), inv) if cartan_unchecked(i, *j) == -1 => {
            if inv {
                Expr::qc(&Expr::f(i), &Expr::f(*j), q)
            } else {
                Expr::qc(&Expr::f(*j), &Expr::f(i), q)
            }
        }
        (Atom::E(_), _) | (Atom::F(_), _) => return None,
        (Atom::B(_), _) => return None,
    })
}

/// Structural action of a braid word on a U_q expression (B-leaves are
/// left untouched; use [`crate::braidaction`] for the coideal side).
pub fn t_word_expr(n: usize, w: &BraidWord, e: &Expr) -> Expr {
    let mut cur = e.clone();
    for l in w.letters.iter().rev() {
        let images: parking_lot::Mutex<FxHashMap<Atom, Expr>> = parking_lot::Mutex::new(FxHashMap::default());
        let f = |a: &Atom| -> Option<Expr> {
            let mut g = images.lock();
            if let Some(hit) = g.get(a) {
                return Some(hit.clone());
            }
            let img = letter_image(n, *l, a)?;
            g.insert(a.clone(), img.clone());
            Some(img)
        };
        cur = Transform {
            atom: &f,
            coeff: None,
            reverse: false,
        }
        .apply(&cur);
    }
    cur
}

// ---------------------------------------------------------------------------
// Action on normal forms
// ---------------------------------------------------------------------------

type ImageKey = (usize, usize, bool, Side, RootIdx);

static ROOT_IMAGES: LazyLock<RwLock<HashMap<ImageKey, Arc<NormalElement>>>> = LazyLock::new(|| RwLock::new(HashMap::new()));

fn letter_on_generator(n: usize, l: Letter, side: Side, i: usize) -> NormalElement {
    let a = match side {
        Side::E => Atom::E(i),
        Side::F => Atom::F(i),
    };
    match letter_image(n, l, &a) {
        Some(img) => crate::expr::Evaluator::new(&crate::uqcore::Pbw { n })
            .eval(&img)
            .expect("generator image evaluates"),
        None => match side {
            Side::E => NormalElement::gen_e(n, i),
            Side::F => NormalElement::gen_f(n, i),
        },
    }
}

/// Image of a root vector under a single letter, memoized.
fn root_image(n: usize, l: Letter, side: Side, k: RootIdx) -> Arc<NormalElement> {
    let key = (n, l.node, l.inverse, side, k);
    if let Some(hit) = ROOT_IMAGES.read().get(&key) {
        return hit.clone();
    }
    let eng = PbwEngine::get(n);
    let (a, b) = eng.root(k);
    let img = if a == b {
        letter_on_generator(n, l, side, a)
    } else {
        // X_[a,b] = [X_a, X_[a+1,b]]_c with c = q^{-1} (E) or q (F).
        let c = match side {
            Side::E => FieldElem::q_pow(-1),
            Side::F => FieldElem::q(),
        };
        let head = root_image(n, l, side, eng.simple(a));
        let rest = root_image(n, l, side, eng.root_index(a + 1, b));
        head.qbracket(&rest, &c)
    };
    let img = Arc::new(img);
    ROOT_IMAGES.write().insert(key, img.clone());
    img
}

fn apply_letter(l: Letter, x: &NormalElement) -> NormalElement {
    let n = x.rank();
    let mut acc = NormalElement::zero(n);
    for (m, c) in x.terms() {
        let mut t = NormalElement::scalar(n, c.clone());
        for k in &m.f {
            t = t.mul(&root_image(n, l, Side::F, *k));
        }
        t = t.mul(&NormalElement::gen_k(n, &reflect_unchecked(l.node, &m.k)));
        for k in &m.e {
            t = t.mul(&root_image(n, l, Side::E, *k));
        }
        acc = acc.add(&t);
    }
    acc
}

/// `T_i(x)`.
pub fn apply_t(i: usize, x: &NormalElement) -> Result<NormalElement, BraidError> {
    check(i, x.rank())?;
    Ok(apply_letter(Letter { node: i, inverse: false }, x))
}

/// `T_i^{-1}(x)`.
pub fn apply_t_inv(i: usize, x: &NormalElement) -> Result<NormalElement, BraidError> {
    check(i, x.rank())?;
    Ok(apply_letter(Letter { node: i, inverse: true }, x))
}

/// `T_w(x)` with the rightmost letter acting first.
pub fn apply_t_word(w: &BraidWord, x: &NormalElement) -> Result<NormalElement, BraidError> {
    w.validate(x.rank())?;
    let mut cur = x.clone();
    for l in w.letters.iter().rev() {
        cur = apply_letter(*l, &cur);
    }
    Ok(cur)
}

fn check(i: usize, n: usize) -> Result<(), BraidError> {
    if (1..=n).contains(&i) {
        Ok(())
    } else {
        Err(BraidError::IndexRange(i, n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::uqcore::{build_ej, build_fj, JSign};

    #[test]
    fn images_of_simple_generators() {
        let n = 3;
        let e1 = NormalElement::gen_e(n, 1);
        let t = apply_t(1, &e1).unwrap();
        let expect = NormalElement::gen_f(n, 1).mul(&NormalElement::gen_ki(n, 1)).neg();
        assert_eq!(t, expect);
        assert_eq!(apply_t(1, &NormalElement::gen_e(n, 3)).unwrap(), NormalElement::gen_e(n, 3));
        let t12 = apply_t(1, &NormalElement::gen_e(n, 2)).unwrap();
        assert_eq!(t12, build_ej(n, 1, 2, JSign::Plus));
    }

    #[test]
    fn inverse_images_compose_to_identity() {
        let n = 3;
        for i in 1..=n {
            for j in 1..=n {
                for g in [NormalElement::gen_e(n, j), NormalElement::gen_f(n, j), NormalElement::gen_ki(n, j)] {
                    let there = apply_t(i, &g).unwrap();
                    assert_eq!(apply_t_inv(i, &there).unwrap(), g);
                    let back = apply_t_inv(i, &g).unwrap();
                    assert_eq!(apply_t(i, &back).unwrap(), g);
                }
            }
        }
    }

    #[test]
    fn structural_and_normal_form_actions_agree() {
        let n = 3;
        let w = BraidWord::positive(&[1, 2, 1]);
        let x = Expr::qc(&Expr::f(2), &Expr::e(3), FieldElem::q());
        let via_expr = t_word_expr(n, &w, &x);
        let pbw = crate::uqcore::Pbw { n };
        let lhs = crate::expr::Evaluator::new(&pbw).eval(&via_expr).unwrap();
        let x_nf = crate::expr::Evaluator::new(&pbw).eval(&x).unwrap();
        assert_eq!(lhs, apply_t_word(&w, &x_nf).unwrap());
    }

    #[test]
    fn longest_element_of_x_swaps_root_vectors() {
        let n = 5;
        let (a, b) = (2, 4);
        let w = BraidWord::positive(&crate::rootdata::longest_word(n, &[2, 3, 4]).unwrap());
        let kx = NormalElement::gen_k(n, &crate::rootdata::interval_root(n, a, b));
        let kxi = NormalElement::gen_k(n, &crate::rootdata::interval_root(n, a, b).neg());
        for s in [JSign::Plus, JSign::Minus] {
            let f = build_fj(n, a, b, s);
            let e = build_ej(n, a, b, s);
            assert_eq!(apply_t_word(&w, &f).unwrap(), kxi.mul(&e).neg());
            assert_eq!(apply_t_word(&w, &e).unwrap(), f.mul(&kx).neg());
        }
    }
}
