//! Expression trees over the generators of U_q and of the coideal B_c.
//!
//! An [`Expr`] is a reference-counted node, so trees are DAGs: the maps of
//! [`crate::lusztig`] and [`crate::braidaction`] substitute generator images
//! by sharing one image node among all occurrences, and [`Evaluator`]
//! memoizes by node identity.  Composites of several maps therefore cost
//! only as much as evaluating each distinct image once.
//!
//! All constructors are "smart": they flatten nested sums and products,
//! fold scalar subexpressions, and turn a scalar factor into a `Scale`
//! node.  The parser uses the same constructors, so rendering a tree and
//! parsing it back reproduces the tree exactly.

use std::fmt;
use std::sync::Arc;

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::coeffield::FieldElem;
use crate::rootdata::Weight;
use crate::uqcore::{render_weight, Algebra};

/// Leaves of an expression tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    E(usize),
    F(usize),
    K(Weight),
    /// A coideal generator B_j (resolved against a parameter set).
    B(usize),
}

/// One node of an expression DAG.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Scalar(FieldElem),
    Atom(Atom),
    Sum(Vec<Expr>),
    Prod(Vec<Expr>),
    Scale(FieldElem, Expr),
    /// `[a, b]_c = ab − c·ba`.
    QBracket(Expr, Expr, FieldElem),
    Pow(Expr, u32),
}

/// A shared expression node.
#[derive(Clone)]
pub struct Expr(Arc<Node>);

impl PartialEq for Expr {
    fn eq(&self, other: &Expr) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Expr {}

/// Errors raised while evaluating an expression.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("generator B[{0}] has no image in this context")]
    UnresolvedB(usize),
    #[error("index {0} out of range for rank {1}")]
    IndexRange(usize, usize),
}

impl Expr {
    fn new(n: Node) -> Expr {
        Expr(Arc::new(n))
    }

    /// Wrap a node as is, without any of the folding done by the smart
    /// constructors.  Used by the parser to rebuild rendered trees exactly.
    pub fn raw(n: Node) -> Expr {
        Expr::new(n)
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    fn key(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    // -----------------------------------------------------------------
    // Constructors
    // -----------------------------------------------------------------

    pub fn scalar(c: FieldElem) -> Expr {
        Expr::new(Node::Scalar(c))
    }

    pub fn int(k: i64) -> Expr {
        Expr::scalar(FieldElem::from_int(k))
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn atom(a: Atom) -> Expr {
        Expr::new(Node::Atom(a))
    }

    pub fn e(i: usize) -> Expr {
        Expr::atom(Atom::E(i))
    }

    pub fn f(i: usize) -> Expr {
        Expr::atom(Atom::F(i))
    }

    pub fn k(mu: Weight) -> Expr {
        Expr::atom(Atom::K(mu))
    }

    pub fn b(j: usize) -> Expr {
        Expr::atom(Atom::B(j))
    }

    pub fn as_scalar(&self) -> Option<&FieldElem> {
        match self.node() {
            Node::Scalar(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero_literal(&self) -> bool {
        self.as_scalar().is_some_and(|c| c.is_zero())
    }

    /// Flattened sum; zero summands are dropped and scalars folded.
    pub fn sum(items: Vec<Expr>) -> Expr {
        let mut flat: Vec<Expr> = Vec::new();
        for x in items {
            match x.node() {
                Node::Sum(ys) => flat.extend(ys.iter().cloned()),
                Node::Scalar(c) if c.is_zero() => {}
                _ => flat.push(x),
            }
        }
        if flat.iter().all(|x| x.as_scalar().is_some()) {
            let mut acc = FieldElem::zero();
            for x in &flat {
                acc = acc.add(x.as_scalar().unwrap());
            }
            return Expr::scalar(acc);
        }
        if flat.len() == 1 {
            return flat.pop().unwrap();
        }
        Expr::new(Node::Sum(flat))
    }

    /// Flattened product with all scalar factors pulled to the front.
    pub fn prod(items: Vec<Expr>) -> Expr {
        let mut coeff = FieldElem::one();
        let mut flat: Vec<Expr> = Vec::new();
        for x in items {
            match x.node() {
                Node::Scalar(c) => coeff = coeff.mul(c),
                Node::Scale(c, y) => {
                    coeff = coeff.mul(c);
                    match y.node() {
                        Node::Prod(ys) => flat.extend(ys.iter().cloned()),
                        _ => flat.push(y.clone()),
                    }
                }
                Node::Prod(ys) => flat.extend(ys.iter().cloned()),
                _ => flat.push(x),
            }
        }
        if coeff.is_zero() {
            return Expr::zero();
        }
        let body = match flat.len() {
            0 => return Expr::scalar(coeff),
            1 => flat.pop().unwrap(),
            _ => Expr::new(Node::Prod(flat)),
        };
        Expr::scale(coeff, body)
    }

    pub fn mul(&self, o: &Expr) -> Expr {
        Expr::prod(vec![self.clone(), o.clone()])
    }

    pub fn add(&self, o: &Expr) -> Expr {
        Expr::sum(vec![self.clone(), o.clone()])
    }

    pub fn sub(&self, o: &Expr) -> Expr {
        Expr::sum(vec![self.clone(), o.neg()])
    }

    pub fn neg(&self) -> Expr {
        Expr::scale(FieldElem::from_int(-1), self.clone())
    }

    /// `c · x`, merged with an existing scale and folded on scalars.
    pub fn scale(c: FieldElem, x: Expr) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        if c.is_one() {
            return x;
        }
        match x.node() {
            Node::Scalar(d) => Expr::scalar(c.mul(d)),
            Node::Scale(d, y) => Expr::scale(c.mul(d), y.clone()),
            _ => Expr::new(Node::Scale(c, x)),
        }
    }

    pub fn scaled(&self, c: &FieldElem) -> Expr {
        Expr::scale(c.clone(), self.clone())
    }

    /// `[a, b]_c`; folds to a scalar when both arguments are scalars.
    pub fn qc(a: &Expr, b: &Expr, c: FieldElem) -> Expr {
        if let (Some(x), Some(y)) = (a.as_scalar(), b.as_scalar()) {
            let one = FieldElem::one();
            return Expr::scalar(x.mul(y).mul(&one.sub(&c)));
        }
        Expr::new(Node::QBracket(a.clone(), b.clone(), c))
    }

    /// Nonnegative power; torus atoms and scalars fold.
    pub fn pow(x: &Expr, k: u32) -> Expr {
        if k == 0 {
            return Expr::one();
        }
        if k == 1 {
            return x.clone();
        }
        match x.node() {
            Node::Scalar(c) => Expr::scalar(c.pow(k as i32).expect("nonnegative power")),
            Node::Atom(Atom::K(mu)) => Expr::k(mu.scale(k as i32)),
            _ => Expr::new(Node::Pow(x.clone(), k)),
        }
    }

    /// Inverse of a torus monomial (scalars and K-atoms, in products).
    pub fn torus_inverse(&self) -> Option<Expr> {
        match self.node() {
            Node::Scalar(c) => c.inv().ok().map(Expr::scalar),
            Node::Atom(Atom::K(mu)) => Some(Expr::k(mu.neg())),
            Node::Scale(c, y) => Some(Expr::scale(c.inv().ok()?, y.torus_inverse()?)),
            Node::Prod(ys) => {
                let mut inv = Vec::new();
                for y in ys.iter().rev() {
                    inv.push(y.torus_inverse()?);
                }
                Some(Expr::prod(inv))
            }
            Node::Pow(y, k) => Some(Expr::pow(&y.torus_inverse()?, *k)),
            _ => None,
        }
    }

    /// Number of distinct nodes in the DAG.
    pub fn dag_size(&self) -> usize {
        let mut seen = rustc_hash::FxHashSet::default();
        fn walk(e: &Expr, seen: &mut rustc_hash::FxHashSet<usize>) {
            if !seen.insert(e.key()) {
                return;
            }
            for c in e.children() {
                walk(c, seen);
            }
        }
        walk(self, &mut seen);
        seen.len()
    }

    pub fn children(&self) -> Vec<&Expr> {
        match self.node() {
            Node::Scalar(_) | Node::Atom(_) => Vec::new(),
            Node::Sum(xs) | Node::Prod(xs) => xs.iter().collect(),
            Node::Scale(_, x) | Node::Pow(x, _) => vec![x],
            Node::QBracket(a, b, _) => vec![a, b],
        }
    }

    /// Whether any leaf satisfies `pred`.
    pub fn any_atom(&self, pred: &dyn Fn(&Atom) -> bool) -> bool {
        let mut seen = rustc_hash::FxHashSet::default();
        fn walk(e: &Expr, pred: &dyn Fn(&Atom) -> bool, seen: &mut rustc_hash::FxHashSet<usize>) -> bool {
            if !seen.insert(e.key()) {
                return false;
            }
            if let Node::Atom(a) = e.node() {
                return pred(a);
            }
            e.children().into_iter().any(|c| walk(c, pred, seen))
        }
        walk(self, pred, &mut seen)
    }

    // -----------------------------------------------------------------
    // Rendering
    // -----------------------------------------------------------------

    /// Text in the expression grammar; parses back to an identical tree.
    pub fn render(&self) -> String {
        let mut s = String::new();
        self.render_into(&mut s);
        s
    }

    fn render_into(&self, s: &mut String) {
        match self.node() {
            Node::Scalar(c) => s.push_str(&format!("({c})")),
            Node::Atom(a) => s.push_str(&render_atom(a)),
            Node::Sum(xs) => {
                s.push('(');
                for (k, x) in xs.iter().enumerate() {
                    if k > 0 {
                        s.push_str(" + ");
                    }
                    x.render_into(s);
                }
                s.push(')');
            }
            Node::Prod(xs) => {
                s.push('(');
                for (k, x) in xs.iter().enumerate() {
                    if k > 0 {
                        s.push('*');
                    }
                    x.render_into(s);
                }
                s.push(')');
            }
            Node::Scale(c, x) => {
                s.push_str(&format!("({c})*"));
                x.render_into(s);
            }
            Node::QBracket(a, b, c) => {
                s.push_str("qc(");
                a.render_into(s);
                s.push_str(", ");
                b.render_into(s);
                s.push_str(&format!(", ({c}))"));
            }
            Node::Pow(x, k) => {
                // `^` binds tighter than a scale prefix or another power.
                let wrap = matches!(x.node(), Node::Scale(..) | Node::Pow(..));
                if wrap {
                    s.push('(');
                }
                x.render_into(s);
                if wrap {
                    s.push(')');
                }
                s.push_str(&format!("^{k}"));
            }
        }
    }
}

fn render_atom(a: &Atom) -> String {
    match a {
        Atom::E(i) => format!("E[{i}]"),
        Atom::F(i) => format!("F[{i}]"),
        Atom::K(mu) => format!("K[{}]", render_weight(mu)),
        Atom::B(j) => format!("B[{j}]"),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

// ---------------------------------------------------------------------------
// Structural transforms
// ---------------------------------------------------------------------------

/// A structure-preserving rewrite: leaves are replaced by images, scalars
/// optionally transformed, and products optionally reversed (for
/// anti-automorphisms).  Shared nodes map to shared nodes.
pub struct Transform<'a> {
    pub atom: &'a (dyn Fn(&Atom) -> Option<Expr> + Sync),
    pub coeff: Option<&'a (dyn Fn(&FieldElem) -> FieldElem + Sync)>,
    pub reverse: bool,
}

impl Transform<'_> {
    pub fn apply(&self, e: &Expr) -> Expr {
        let mut memo = FxHashMap::default();
        self.go(e, &mut memo)
    }

    /// Apply with a memo shared across several roots.
    pub fn apply_shared(&self, e: &Expr, memo: &mut FxHashMap<usize, Expr>) -> Expr {
        self.go(e, memo)
    }

    fn c(&self, c: &FieldElem) -> FieldElem {
        match self.coeff {
            Some(f) => f(c),
            None => c.clone(),
        }
    }

    fn go(&self, e: &Expr, memo: &mut FxHashMap<usize, Expr>) -> Expr {
        if let Some(hit) = memo.get(&e.key()) {
            return hit.clone();
        }
        let out = match e.node() {
            Node::Scalar(c) => Expr::scalar(self.c(c)),
            Node::Atom(a) => (self.atom)(a).unwrap_or_else(|| e.clone()),
            Node::Sum(xs) => Expr::sum(xs.iter().map(|x| self.go(x, memo)).collect()),
            Node::Prod(xs) => {
                let mut ys: Vec<Expr> = xs.iter().map(|x| self.go(x, memo)).collect();
                if self.reverse {
                    ys.reverse();
                }
                Expr::prod(ys)
            }
            Node::Scale(c, x) => Expr::scale(self.c(c), self.go(x, memo)),
            Node::QBracket(a, b, c) => {
                let (a2, b2) = (self.go(a, memo), self.go(b, memo));
                if self.reverse {
                    // φ(ab − c·ba) = φ(b)φ(a) − c·φ(a)φ(b)
                    Expr::qc(&b2, &a2, self.c(c))
                } else {
                    Expr::qc(&a2, &b2, self.c(c))
                }
            }
            Node::Pow(x, k) => Expr::pow(&self.go(x, memo), *k),
        };
        memo.insert(e.key(), out.clone());
        out
    }
}

/// Replace atoms according to `f`, sharing images.
pub fn substitute(e: &Expr, f: &(dyn Fn(&Atom) -> Option<Expr> + Sync)) -> Expr {
    Transform {
        atom: f,
        coeff: None,
        reverse: false,
    }
    .apply(e)
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// Memoizing evaluator of expression DAGs in an [`Algebra`].
pub struct Evaluator<'a, A: Algebra> {
    alg: &'a A,
    b_image: Option<&'a (dyn Fn(usize) -> Option<Expr> + Sync)>,
    memo: FxHashMap<usize, A::Elem>,
    b_memo: FxHashMap<usize, A::Elem>,
    pinned: Vec<Expr>,
}

impl<'a, A: Algebra> Evaluator<'a, A> {
    pub fn new(alg: &'a A) -> Self {
        Evaluator {
            alg,
            b_image: None,
            memo: FxHashMap::default(),
            b_memo: FxHashMap::default(),
            pinned: Vec::new(),
        }
    }

    /// Resolve `B[j]` leaves through `f` (an expression in E, F, K).
    pub fn with_b(alg: &'a A, f: &'a (dyn Fn(usize) -> Option<Expr> + Sync)) -> Self {
        let mut ev = Evaluator::new(alg);
        ev.b_image = Some(f);
        ev
    }

    pub fn eval(&mut self, e: &Expr) -> Result<A::Elem, EvalError> {
        if let Some(hit) = self.memo.get(&e.key()) {
            return Ok(hit.clone());
        }
        let alg = self.alg;
        let n = alg.rank();
        let out = match e.node() {
            Node::Scalar(c) => alg.scalar(c),
            Node::Atom(a) => match a {
                Atom::E(i) => {
                    check(*i, n)?;
                    alg.gen_e(*i)
                }
                Atom::F(i) => {
                    check(*i, n)?;
                    alg.gen_f(*i)
                }
                Atom::K(mu) => alg.gen_k(mu),
                Atom::B(j) => {
                    if let Some(hit) = self.b_memo.get(j) {
                        hit.clone()
                    } else {
                        let img = self.b_image.and_then(|f| f(*j)).ok_or(EvalError::UnresolvedB(*j))?;
                        let v = self.eval(&img)?;
                        self.pinned.push(img);
                        self.b_memo.insert(*j, v.clone());
                        v
                    }
                }
            },
            Node::Sum(xs) => {
                let mut acc = alg.zero();
                for x in xs {
                    let v = self.eval(x)?;
                    acc = alg.add(&acc, &v);
                }
                acc
            }
            Node::Prod(xs) => {
                let mut acc = self.eval(&xs[0])?;
                for x in &xs[1..] {
                    let v = self.eval(x)?;
                    acc = alg.mul(&acc, &v);
                }
                acc
            }
            Node::Scale(c, x) => {
                let v = self.eval(x)?;
                alg.scale(&v, c)
            }
            Node::QBracket(a, b, c) => {
                let x = self.eval(a)?;
                let y = self.eval(b)?;
                alg.qbracket(&x, &y, c)
            }
            Node::Pow(x, k) => {
                let v = self.eval(x)?;
                let mut acc = v.clone();
                for _ in 1..*k {
                    acc = alg.mul(&acc, &v);
                }
                acc
            }
        };
        self.pinned.push(e.clone());
        self.memo.insert(e.key(), out.clone());
        Ok(out)
    }
}

fn check(i: usize, n: usize) -> Result<(), EvalError> {
    if (1..=n).contains(&i) {
        Ok(())
    } else {
        Err(EvalError::IndexRange(i, n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smart_constructors_fold() {
        let x = Expr::e(1);
        assert_eq!(Expr::sum(vec![x.clone(), Expr::zero()]), x);
        let p = Expr::prod(vec![Expr::int(2), x.clone(), Expr::int(3)]);
        assert_eq!(p, Expr::scale(FieldElem::from_int(6), x.clone()));
        assert_eq!(Expr::prod(vec![Expr::int(0), x.clone()]), Expr::zero());
        let k = Expr::k(Weight::from_coords(&[1, -1]));
        assert_eq!(k.torus_inverse().unwrap(), Expr::k(Weight::from_coords(&[-1, 1])));
    }

    #[test]
    fn substitution_shares_images() {
        let x = Expr::prod(vec![Expr::b(1), Expr::b(1), Expr::b(2)]);
        let img = Expr::qc(&Expr::f(1), &Expr::e(2), FieldElem::q());
        let y = substitute(&x, &|a| match a {
            Atom::B(1) => Some(img.clone()),
            _ => None,
        });
        match y.node() {
            Node::Prod(xs) => assert!(Arc::ptr_eq(&xs[0].0, &xs[1].0)),
            _ => panic!("expected a product"),
        }
    }
}
