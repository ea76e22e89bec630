//! PBW straightening engine for U_q(sl_{n+1}).
//!
//! Elements are written in the triangular basis F-part · K_μ · E-part,
//! where the F- and E-parts are ordered products of root vectors
//!
//! ```text
//!   E_[a,b] = [E_a, [E_{a+1}, … [E_{b-1}, E_b]_{q^-1} …]_{q^-1}]_{q^-1}
//!   F_[a,b] = [F_a, [F_{a+1}, … [F_{b-1}, F_b]_q …]_q]_q
//! ```
//!
//! in the lexicographic order of intervals, which is a convex order on the
//! positive roots.  For a pair of root vectors out of order the
//! Levendorskii–Soibelman property gives an explicit rewrite into ordered
//! monomials whose roots lie strictly between; in type A there are six
//! shapes (shared start, disjoint, adjacent, nested, shared end, crossing).
//! Mixed products E·F are reduced with the skew-derivation rule for
//! [E_i, –] applied through the root-vector definitions.  Every
//! intermediate product is memoized per rank and shared between threads.

use std::collections::HashMap;
use std::sync::Arc;

use std::sync::LazyLock;

use parking_lot::{Mutex, RwLock};
use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::coeffield::FieldElem;
use crate::rootdata::{alpha, interval_pairing, positive_roots, Weight};

/// Index of a positive root in the fixed convex order.
pub type RootIdx = u8;

/// An ordered (non-decreasing) product of root vectors.
pub type RootWord = SmallVec<[RootIdx; 12]>;

/// Which triangular half a root word lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    F,
    E,
}

/// Terms of an element of U^- U^0 (no E-part).
pub(crate) type FkTerms = Vec<(RootWord, Weight, FieldElem)>;

/// A linear combination of triangular basis monomials.
pub(crate) type Terms = Vec<(RootWord, Weight, RootWord, FieldElem)>;

/// Memo of `word · root vector` products, keyed by the word and the root.
type WordMemo = RwLock<FxHashMap<(RootWord, RootIdx), Arc<Vec<(RootWord, FieldElem)>>>>;

/// Straightening context for a fixed rank, holding the memo tables.
pub struct PbwEngine {
    pub n: usize,
    roots: Vec<(usize, usize)>,
    index: Vec<Vec<RootIdx>>,
    root_weight: Vec<Weight>,
    rmul_f: WordMemo,
    rmul_e: WordMemo,
    comm: RwLock<FxHashMap<(RootIdx, RootWord), Arc<FkTerms>>>,
    ef_single: RwLock<FxHashMap<(RootIdx, RootWord), Arc<Terms>>>,
    ef: RwLock<FxHashMap<(RootWord, RootWord), Arc<Terms>>>,
}

static ENGINES: LazyLock<Mutex<HashMap<usize, Arc<PbwEngine>>>> = LazyLock::new(|| Mutex::new(HashMap::new()));

impl PbwEngine {
    /// The shared engine for rank `n`.
    pub fn get(n: usize) -> Arc<PbwEngine> {
        let mut g = ENGINES.lock();
        g.entry(n)
            .or_insert_with(|| Arc::new(PbwEngine::new(n)))
            .clone()
    }

    fn new(n: usize) -> PbwEngine {
        let roots = positive_roots(n);
        assert!(roots.len() < 256, "rank too large for the PBW engine");
        let mut index = vec![vec![0u8; n + 1]; n + 1];
        let mut root_weight = Vec::new();
        for (k, (a, b)) in roots.iter().enumerate() {
            index[*a][*b] = k as RootIdx;
            let mut w = Weight::zero(n);
            for i in *a..=*b {
                w = w.add(&alpha(n, i));
            }
            root_weight.push(w);
        }
        PbwEngine {
            n,
            roots,
            index,
            root_weight,
            rmul_f: RwLock::new(FxHashMap::default()),
            rmul_e: RwLock::new(FxHashMap::default()),
            comm: RwLock::new(FxHashMap::default()),
            ef_single: RwLock::new(FxHashMap::default()),
            ef: RwLock::new(FxHashMap::default()),
        }
    }

    pub fn roots(&self) -> &[(usize, usize)] {
        &self.roots
    }

    pub fn root(&self, k: RootIdx) -> (usize, usize) {
        self.roots[k as usize]
    }

    pub fn root_index(&self, a: usize, b: usize) -> RootIdx {
        self.index[a][b]
    }

    pub fn simple(&self, i: usize) -> RootIdx {
        self.index[i][i]
    }

    pub fn root_weight(&self, k: RootIdx) -> &Weight {
        &self.root_weight[k as usize]
    }

    /// Total weight (sum of roots) of a root word, as a weight.
    pub fn word_weight(&self, w: &RootWord) -> Weight {
        let mut acc = Weight::zero(self.n);
        for k in w {
            acc = acc.add(&self.root_weight[*k as usize]);
        }
        acc
    }

    /// `(wt(w), μ)` for a root word and a weight: Σ over roots of Σ μ_i.
    pub fn word_pair(&self, w: &RootWord, mu: &Weight) -> i32 {
        let mut s = 0;
        for k in w {
            let (a, b) = self.roots[*k as usize];
            for i in a..=b {
                s += mu.pair_simple(i);
            }
        }
        s
    }

    /// Height of a word (number of simple roots counted with multiplicity).
    pub fn word_height(&self, w: &RootWord) -> usize {
        w.iter()
            .map(|k| {
                let (a, b) = self.roots[*k as usize];
                b - a + 1
            })
            .sum()
    }

    // -----------------------------------------------------------------
    // Root-vector rewrite rules
    // -----------------------------------------------------------------

    /// Rewrite X_γ X_β (γ > β in the convex order) as ordered terms.  On
    /// the E-side `qq` is q; on the F-side it is q^{-1}.
    fn swap_rule(&self, side: Side, g: RootIdx, b: RootIdx) -> Vec<(RootWord, FieldElem)> {
        let (c, d) = self.roots[g as usize];
        let (a, bb) = self.roots[b as usize];
        let s = match side {
            Side::E => 1,
            Side::F => -1,
        };
        let ordered: RootWord = SmallVec::from_slice(&[b, g]);
        let one = FieldElem::one();
        if c == a {
            // shared start: X_γ X_β = q^{-(β,γ)} X_β X_γ with (β,γ) = 1
            return vec![(ordered, FieldElem::q_pow(-s))];
        }
        if c > bb + 1 {
            return vec![(ordered, one)];
        }
        if c == bb + 1 {
            // adjacent: X_γ X_β = q X_β X_γ − q X_[a,d]
            let ad: RootWord = SmallVec::from_slice(&[self.index[a][d]]);
            return vec![
                (ordered, FieldElem::q_pow(s)),
                (ad, FieldElem::q_pow(s).neg()),
            ];
        }
        // overlapping: a < c ≤ bb
        if d < bb {
            return vec![(ordered, one)];
        }
        if d == bb {
            return vec![(ordered, FieldElem::q_pow(-s))];
        }
        // crossing: X_γ X_β = X_β X_γ + (q^{-1} − q) X_[a,d] X_[c,bb]
        let cross: RootWord = SmallVec::from_slice(&[self.index[a][d], self.index[c][bb]]);
        let coef = FieldElem::q_pow(-s).sub(&FieldElem::q_pow(s));
        vec![(ordered, one), (cross, coef)]
    }

    /// Right-multiply an ordered word by one root vector.
    pub fn rmul(&self, side: Side, w: &RootWord, b: RootIdx) -> Arc<Vec<(RootWord, FieldElem)>> {
        if w.last().is_none_or(|l| *l <= b) {
            let mut v = w.clone();
            v.push(b);
            return Arc::new(vec![(v, FieldElem::one())]);
        }
        let table = match side {
            Side::F => &self.rmul_f,
            Side::E => &self.rmul_e,
        };
        let key = (w.clone(), b);
        if let Some(hit) = table.read().get(&key) {
            return hit.clone();
        }
        let g = *w.last().unwrap();
        let prefix: RootWord = SmallVec::from_slice(&w[..w.len() - 1]);
        let mut acc: FxHashMap<RootWord, FieldElem> = FxHashMap::default();
        for (tail, c) in self.swap_rule(side, g, b) {
            for (word, c2) in self.mul_words_from(side, &prefix, &tail) {
                add_into(&mut acc, word, c.mul(&c2));
            }
        }
        let res = Arc::new(finish_words(acc));
        table.write().insert(key, res.clone());
        res
    }

    /// Ordered product of two ordered words.
    pub fn mul_words(&self, side: Side, w1: &RootWord, w2: &RootWord) -> Vec<(RootWord, FieldElem)> {
        self.mul_words_from(side, w1, w2)
    }

    fn mul_words_from(&self, side: Side, w1: &RootWord, w2: &RootWord) -> Vec<(RootWord, FieldElem)> {
        if w2.is_empty() {
            return vec![(w1.clone(), FieldElem::one())];
        }
        if w1.is_empty() || w1.last().unwrap() <= w2.first().unwrap() {
            let mut v = w1.clone();
            v.extend_from_slice(w2);
            return vec![(v, FieldElem::one())];
        }
        let mut cur: Vec<(RootWord, FieldElem)> = vec![(w1.clone(), FieldElem::one())];
        for b in w2.iter() {
            let mut acc: FxHashMap<RootWord, FieldElem> = FxHashMap::default();
            for (w, c) in &cur {
                for (w3, c3) in self.rmul(side, w, *b).iter() {
                    add_into(&mut acc, w3.clone(), c.mul(c3));
                }
            }
            cur = finish_words(acc);
        }
        cur
    }

    // -----------------------------------------------------------------
    // U^- U^0 arithmetic
    // -----------------------------------------------------------------

    /// (F1 K1)(F2 K2) = q^{-(wt F2, μ1)} (F1 F2) K_{μ1+μ2}.
    fn fk_mul(&self, x: &FkTerms, y: &FkTerms) -> FkTerms {
        let mut acc: FxHashMap<(RootWord, Weight), FieldElem> = FxHashMap::default();
        for (f1, k1, c1) in x {
            for (f2, k2, c2) in y {
                let qexp = -self.word_pair(f2, k1);
                let c = c1.mul(c2).mul(&FieldElem::q_pow(qexp));
                let k = k1.add(k2);
                for (f, cf) in self.mul_words(Side::F, f1, f2) {
                    let key = (f, k.clone());
                    add_into(&mut acc, key, c.mul(&cf));
                }
            }
        }
        let mut v: FkTerms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((f, k), c)| (f, k, c))
            .collect();
        v.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
        v
    }

    fn fk_lin(&self, parts: &[(&FkTerms, FieldElem)]) -> FkTerms {
        let mut acc: FxHashMap<(RootWord, Weight), FieldElem> = FxHashMap::default();
        for (t, s) in parts {
            for (f, k, c) in t.iter() {
                add_into(&mut acc, (f.clone(), k.clone()), c.mul(s));
            }
        }
        let mut v: FkTerms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((f, k), c)| (f, k, c))
            .collect();
        v.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
        v
    }

    fn fk_word(&self, w: RootWord) -> FkTerms {
        vec![(w, Weight::zero(self.n), FieldElem::one())]
    }

    /// [E_i, F_β] for a single root vector, in U^- U^0.
    fn comm_root(&self, i: usize, b: RootIdx) -> Arc<FkTerms> {
        let w: RootWord = SmallVec::from_slice(&[b]);
        self.comm(i, &w)
    }

    /// [E_i, F-monomial] ∈ U^- U^0.
    pub fn comm(&self, i: usize, w: &RootWord) -> Arc<FkTerms> {
        if w.is_empty() {
            return Arc::new(Vec::new());
        }
        let key = (i as RootIdx, w.clone());
        if let Some(hit) = self.comm.read().get(&key) {
            return hit.clone();
        }
        let res = if w.len() == 1 {
            let (a, b) = self.roots[w[0] as usize];
            if a == b {
                if a == i {
                    let d = FieldElem::q_minus_qinv().inv().expect("q - q^-1 is nonzero");
                    let ai = alpha(self.n, i);
                    vec![
                        (RootWord::new(), ai.clone(), d.clone()),
                        (RootWord::new(), ai.neg(), d.neg()),
                    ]
                } else {
                    Vec::new()
                }
            } else if i < a || i > b {
                Vec::new()
            } else {
                // F_β = F_a F_β' − q F_β' F_a with β' = [a+1, b].
                let fa = self.simple(a);
                let fb = self.index[a + 1][b];
                let x_a = self.fk_word(SmallVec::from_slice(&[fa]));
                let x_b = self.fk_word(SmallVec::from_slice(&[fb]));
                let ca = self.comm_root(i, fa);
                let cb = self.comm_root(i, fb);
                // [E_i, F_a F_β'] = [E_i,F_a] F_β' + F_a [E_i,F_β']
                let t1 = self.fk_mul(&ca, &x_b);
                let t2 = self.fk_mul(&x_a, &cb);
                // [E_i, F_β' F_a] = [E_i,F_β'] F_a + F_β' [E_i,F_a]
                let t3 = self.fk_mul(&cb, &x_a);
                let t4 = self.fk_mul(&x_b, &ca);
                let mq = FieldElem::q().neg();
                self.fk_lin(&[
                    (&t1, FieldElem::one()),
                    (&t2, FieldElem::one()),
                    (&t3, mq.clone()),
                    (&t4, mq),
                ])
            }
        } else {
            let (last, prefix) = w.split_last().unwrap();
            let prefix: RootWord = SmallVec::from_slice(prefix);
            let lastw = self.fk_word(SmallVec::from_slice(&[*last]));
            let cp = self.comm(i, &prefix);
            let cl = self.comm_root(i, *last);
            let t1 = self.fk_mul(&cp, &lastw);
            let t2 = self.fk_mul(&self.fk_word(prefix), &cl);
            self.fk_lin(&[(&t1, FieldElem::one()), (&t2, FieldElem::one())])
        };
        let res = Arc::new(res);
        self.comm.write().insert(key, res.clone());
        res
    }

    // -----------------------------------------------------------------
    // E · F
    // -----------------------------------------------------------------

    /// E_γ · (F K_μ E) for a single root vector γ, given its E·F product
    /// with the F-part.
    fn lmul_root_term(&self, g: RootIdx, f: &RootWord, mu: &Weight, e: &RootWord, c: &FieldElem, acc: &mut FxHashMap<(RootWord, Weight, RootWord), FieldElem>) {
        for (f2, nu, e2, c2) in self.ef_single(g, f).iter() {
            let qexp = -self.word_pair(e2, mu);
            let cc = c.mul(c2).mul(&FieldElem::q_pow(qexp));
            let k = nu.add(mu);
            for (e3, c3) in self.mul_words(Side::E, e2, e) {
                add_into(acc, (f2.clone(), k.clone(), e3), cc.mul(&c3));
            }
        }
    }

    /// E_γ · F-monomial for a single root vector γ.
    pub(crate) fn ef_single(&self, g: RootIdx, f: &RootWord) -> Arc<Terms> {
        let key = (g, f.clone());
        if let Some(hit) = self.ef_single.read().get(&key) {
            return hit.clone();
        }
        let (a, b) = self.roots[g as usize];
        let zero = Weight::zero(self.n);
        let res: Terms = if f.is_empty() {
            vec![(RootWord::new(), zero, SmallVec::from_slice(&[g]), FieldElem::one())]
        } else if a == b {
            // E_i F = F E_i + [E_i, F]
            let mut v: Terms = vec![(f.clone(), zero.clone(), SmallVec::from_slice(&[g]), FieldElem::one())];
            for (f2, k2, c2) in self.comm(a, f).iter() {
                v.push((f2.clone(), k2.clone(), RootWord::new(), c2.clone()));
            }
            v
        } else {
            // E_γ = E_a E_γ' − q^{-1} E_γ' E_a
            let ea = self.simple(a);
            let eg = self.index[a + 1][b];
            let mut acc: FxHashMap<(RootWord, Weight, RootWord), FieldElem> = FxHashMap::default();
            let one = FieldElem::one();
            for (f2, k2, e2, c2) in self.ef_single(eg, f).iter() {
                self.lmul_root_term(ea, f2, k2, e2, &c2.mul(&one), &mut acc);
            }
            let mqi = FieldElem::q_pow(-1).neg();
            for (f2, k2, e2, c2) in self.ef_single(ea, f).iter() {
                self.lmul_root_term(eg, f2, k2, e2, &c2.mul(&mqi), &mut acc);
            }
            finish_terms(acc)
        };
        let res = Arc::new(res);
        self.ef_single.write().insert(key, res.clone());
        res
    }

    /// E-monomial · F-monomial in normal form.
    pub(crate) fn ef(&self, e: &RootWord, f: &RootWord) -> Arc<Terms> {
        let zero = Weight::zero(self.n);
        if e.is_empty() || f.is_empty() {
            return Arc::new(vec![(f.clone(), zero, e.clone(), FieldElem::one())]);
        }
        if e.len() == 1 {
            return self.ef_single(e[0], f);
        }
        let key = (e.clone(), f.clone());
        if let Some(hit) = self.ef.read().get(&key) {
            return hit.clone();
        }
        let (first, rest) = e.split_first().unwrap();
        let rest: RootWord = SmallVec::from_slice(rest);
        let mut acc: FxHashMap<(RootWord, Weight, RootWord), FieldElem> = FxHashMap::default();
        for (f2, k2, e2, c2) in self.ef(&rest, f).iter() {
            self.lmul_root_term(*first, f2, k2, e2, c2, &mut acc);
        }
        let res = Arc::new(finish_terms(acc));
        self.ef.write().insert(key, res.clone());
        res
    }

    /// Product of two basis monomials, accumulated into `acc` with scalar `c`.
    pub(crate) fn mul_basis_into(
        &self,
        (f1, k1, e1): (&RootWord, &Weight, &RootWord),
        (f2, k2, e2): (&RootWord, &Weight, &RootWord),
        c: &FieldElem,
        acc: &mut FxHashMap<(RootWord, Weight, RootWord), FieldElem>,
    ) {
        let mid = self.ef(e1, f2);
        for (fm, km, em, cm) in mid.iter() {
            let qexp = -self.word_pair(fm, k1) - self.word_pair(em, k2);
            let cc = c.mul(cm).mul(&FieldElem::q_pow(qexp));
            let k = k1.add(km).add(k2);
            let fs = self.mul_words(Side::F, f1, fm);
            let es = self.mul_words(Side::E, em, e2);
            for (f, cf) in &fs {
                let cfc = cc.mul(cf);
                for (e, ce) in &es {
                    add_into(acc, (f.clone(), k.clone(), e.clone()), cfc.mul(ce));
                }
            }
        }
    }

    /// Number of memoized entries (for diagnostics).
    pub fn cache_sizes(&self) -> [usize; 5] {
        [
            self.rmul_f.read().len(),
            self.rmul_e.read().len(),
            self.comm.read().len(),
            self.ef_single.read().len(),
            self.ef.read().len(),
        ]
    }

    /// The symmetric pairing of two roots by index.
    pub fn root_pairing(&self, x: RootIdx, y: RootIdx) -> i32 {
        interval_pairing(self.roots[x as usize], self.roots[y as usize])
    }
}

pub(crate) fn add_into<K: std::hash::Hash + Eq>(acc: &mut FxHashMap<K, FieldElem>, k: K, c: FieldElem) {
    if c.is_zero() {
        return;
    }
    match acc.get_mut(&k) {
        Some(v) => *v = v.add(&c),
        None => {
            acc.insert(k, c);
        }
    }
}

fn finish_words(acc: FxHashMap<RootWord, FieldElem>) -> Vec<(RootWord, FieldElem)> {
    let mut v: Vec<(RootWord, FieldElem)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    v.sort_by(|a, b| a.0.cmp(&b.0));
    v
}

pub(crate) fn finish_terms(acc: FxHashMap<(RootWord, Weight, RootWord), FieldElem>) -> Terms {
    let mut v: Terms = acc
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((f, k, e), c)| (f, k, e, c))
        .collect();
    v.sort_by(|a, b| (&a.0, &a.1, &a.2).cmp(&(&b.0, &b.1, &b.2)));
    v
}
