//! Sparse multivariate Laurent polynomials over ℤ.
//!
//! Terms are kept sorted by a degree-lexicographic order, leading term
//! first.  Exponents may be negative: every variable is invertible in the
//! coefficient field, so monomials are units and only the "polynomial part"
//! matters for gcds.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use super::int::Int;
use super::symbols::{symbol_name, Symbol};

// ---------------------------------------------------------------------------
// Monomials
// ---------------------------------------------------------------------------

/// A Laurent monomial: sparse `(symbol, exponent)` pairs sorted by symbol,
/// zero exponents omitted.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Mono {
    deg: i32,
    vars: SmallVec<[(Symbol, i16); 4]>,
}

impl Mono {
    pub fn one() -> Mono {
        Mono::default()
    }

    pub fn var(s: Symbol, e: i16) -> Mono {
        if e == 0 {
            return Mono::one();
        }
        let mut vars = SmallVec::new();
        vars.push((s, e));
        Mono { deg: e as i32, vars }
    }

    pub fn is_one(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn degree(&self) -> i32 {
        self.deg
    }

    pub fn exp(&self, s: Symbol) -> i16 {
        self.vars
            .iter()
            .find(|(v, _)| *v == s)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn vars(&self) -> impl Iterator<Item = (Symbol, i16)> + '_ {
        self.vars.iter().copied()
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        if o.vars.is_empty() {
            return self.clone();
        }
        if self.vars.is_empty() {
            return o.clone();
        }
        let mut vars: SmallVec<[(Symbol, i16); 4]> = SmallVec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.vars.len() && j < o.vars.len() {
            let (a, ea) = self.vars[i];
            let (b, eb) = o.vars[j];
            match a.cmp(&b) {
                Ordering::Less => {
                    vars.push((a, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    vars.push((b, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    let e = ea + eb;
                    if e != 0 {
                        vars.push((a, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        vars.extend_from_slice(&self.vars[i..]);
        vars.extend_from_slice(&o.vars[j..]);
        Mono { deg: self.deg + o.deg, vars }
    }

    pub fn inv(&self) -> Mono {
        Mono {
            deg: -self.deg,
            vars: self.vars.iter().map(|(s, e)| (*s, -e)).collect(),
        }
    }

    pub fn div(&self, o: &Mono) -> Mono {
        self.mul(&o.inv())
    }

    pub fn pow(&self, k: i16) -> Mono {
        if k == 0 {
            return Mono::one();
        }
        Mono {
            deg: self.deg * k as i32,
            vars: self.vars.iter().map(|(s, e)| (*s, e * k)).collect(),
        }
    }

    /// Componentwise minimum of exponents (gcd in the polynomial sense,
    /// allowing negative exponents).
    pub fn min_exp(&self, o: &Mono) -> Mono {
        let mut vars: SmallVec<[(Symbol, i16); 4]> = SmallVec::new();
        let (mut i, mut j) = (0, 0);
        loop {
            let a = self.vars.get(i).copied();
            let b = o.vars.get(j).copied();
            match (a, b) {
                (None, None) => break,
                (Some((s, e)), None) => {
                    if e < 0 {
                        vars.push((s, e));
                    }
                    i += 1;
                }
                (None, Some((s, e))) => {
                    if e < 0 {
                        vars.push((s, e));
                    }
                    j += 1;
                }
                (Some((sa, ea)), Some((sb, eb))) => match sa.cmp(&sb) {
                    Ordering::Less => {
                        if ea < 0 {
                            vars.push((sa, ea));
                        }
                        i += 1;
                    }
                    Ordering::Greater => {
                        if eb < 0 {
                            vars.push((sb, eb));
                        }
                        j += 1;
                    }
                    Ordering::Equal => {
                        let e = ea.min(eb);
                        if e != 0 {
                            vars.push((sa, e));
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
        let deg = vars.iter().map(|(_, e)| *e as i32).sum();
        Mono { deg, vars }
    }

    /// Remove one variable, returning its exponent and the rest.
    pub fn split_off(&self, s: Symbol) -> (i16, Mono) {
        let mut rest = self.clone();
        if let Some(pos) = rest.vars.iter().position(|(v, _)| *v == s) {
            let (_, e) = rest.vars.remove(pos);
            rest.deg -= e as i32;
            (e, rest)
        } else {
            (0, rest)
        }
    }
}

impl Ord for Mono {
    /// Degree-lexicographic: total degree first, then the exponent of the
    /// largest symbol (u < t_1 < t_2 < …) decides.
    fn cmp(&self, o: &Mono) -> Ordering {
        self.deg.cmp(&o.deg).then_with(|| {
            let (mut i, mut j) = (self.vars.len(), o.vars.len());
            loop {
                match (i, j) {
                    (0, 0) => return Ordering::Equal,
                    (0, _) => {
                        let (_, eb) = o.vars[j - 1];
                        return 0.cmp(&eb);
                    }
                    (_, 0) => {
                        let (_, ea) = self.vars[i - 1];
                        return ea.cmp(&0);
                    }
                    _ => {
                        let (sa, ea) = self.vars[i - 1];
                        let (sb, eb) = o.vars[j - 1];
                        match sa.cmp(&sb) {
                            Ordering::Greater => return ea.cmp(&0),
                            Ordering::Less => return 0.cmp(&eb),
                            Ordering::Equal => {
                                if ea != eb {
                                    return ea.cmp(&eb);
                                }
                                i -= 1;
                                j -= 1;
                            }
                        }
                    }
                }
            }
        })
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Mono) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (s, e) in self.vars.iter() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{}", symbol_name(*s))?;
            } else {
                write!(f, "{}^{}", symbol_name(*s), e)?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// ---------------------------------------------------------------------------
// Polynomials
// ---------------------------------------------------------------------------

/// A Laurent polynomial with integer coefficients, terms sorted with the
/// leading (largest) monomial first and no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Mono, Int)>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Int::ONE)
    }

    pub fn constant(c: Int) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(Mono::one(), c)],
            }
        }
    }

    pub fn monomial(m: Mono, c: Int) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Build from arbitrary terms, combining duplicates and sorting.
    pub fn from_terms(mut terms: Vec<(Mono, Int)>) -> Poly {
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Mono, Int)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            if let Some(last) = out.last_mut() {
                if last.0 == m {
                    last.1 = last.1.add(&c);
                    continue;
                }
            }
            out.push((m, c));
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { terms: out }
    }

    pub fn terms(&self) -> &[(Mono, Int)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// A single term (a unit up to its integer coefficient).
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn lead(&self) -> &(Mono, Int) {
        &self.terms[0]
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        self.merge(o, false)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.merge(o, true)
    }

    fn merge(&self, o: &Poly, negate: bool) -> Poly {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { o.neg() } else { o.clone() };
        }
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &o.terms[j];
            match ma.cmp(mb) {
                Ordering::Greater => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((mb.clone(), if negate { -cb } else { cb.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { ca.sub(cb) } else { ca.add(cb) };
                    if !c.is_zero() {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        for (m, c) in &o.terms[j..] {
            out.push((m.clone(), if negate { -c } else { c.clone() }));
        }
        Poly { terms: out }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if o.terms.len() == 1 {
            return self.mul_term(&o.terms[0].0, &o.terms[0].1);
        }
        if self.terms.len() == 1 {
            return o.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let mut prods = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                prods.push((ma.mul(mb), ca.mul(cb)));
            }
        }
        Poly::from_terms(prods)
    }

    /// Multiply by a single term; order is preserved so no re-sort.
    pub fn mul_term(&self, m: &Mono, c: &Int) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(mm, cc)| (mm.mul(m), cc.mul(c)))
                .collect(),
        }
    }

    pub fn mul_int(&self, c: &Int) -> Poly {
        self.mul_term(&Mono::one(), c)
    }

    pub fn div_int_exact(&self, c: &Int) -> Poly {
        if c.is_one() {
            return self.clone();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, cc)| (m.clone(), cc.div_exact(c)))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Integer content (gcd of coefficients), non-negative.
    pub fn content(&self) -> Int {
        let mut g = Int::ZERO;
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Componentwise minimum exponent over all terms (absent symbols count
    /// as exponent 0).
    pub fn min_mono(&self) -> Mono {
        let mut it = self.terms.iter();
        let mut m = match it.next() {
            Some((m, _)) => m.clone(),
            None => return Mono::one(),
        };
        for (mm, _) in it {
            m = m.min_exp(mm);
        }
        m
    }

    /// Divide every term by a monomial (always exact in the Laurent ring).
    pub fn div_mono(&self, m: &Mono) -> Poly {
        if m.is_one() {
            return self.clone();
        }
        let inv = m.inv();
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(mm, c)| (mm.mul(&inv), c.clone()))
                .collect(),
        }
    }

    /// The set of symbols that occur.
    pub fn symbols(&self) -> Vec<Symbol> {
        let mut out: Vec<Symbol> = Vec::new();
        for (m, _) in &self.terms {
            for (s, _) in m.vars() {
                if !out.contains(&s) {
                    out.push(s);
                }
            }
        }
        out.sort();
        out
    }

    pub fn degree_in(&self, s: Symbol) -> i16 {
        self.terms.iter().map(|(m, _)| m.exp(s)).max().unwrap_or(0)
    }

    /// View as a polynomial in `s` with coefficients free of `s`.  Returned
    /// in decreasing order of the exponent of `s`.
    pub fn coeffs_in(&self, s: Symbol) -> Vec<(i16, Poly)> {
        let mut buckets: Vec<(i16, Vec<(Mono, Int)>)> = Vec::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(s);
            match buckets.iter_mut().find(|(ee, _)| *ee == e) {
                Some((_, v)) => v.push((rest, c.clone())),
                None => buckets.push((e, vec![(rest, c.clone())])),
            }
        }
        buckets.sort_by_key(|b| std::cmp::Reverse(b.0));
        buckets
            .into_iter()
            .map(|(e, t)| (e, Poly::from_terms(t)))
            .collect()
    }

    pub fn from_coeffs(s: Symbol, cs: &[(i16, Poly)]) -> Poly {
        let mut terms = Vec::new();
        for (e, p) in cs {
            let m = Mono::var(s, *e);
            for (mm, c) in &p.terms {
                terms.push((mm.mul(&m), c.clone()));
            }
        }
        Poly::from_terms(terms)
    }

    /// Exact division by `d`.  Returns `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if d.terms.len() == 1 {
            let (m, c) = &d.terms[0];
            if !self.terms.iter().all(|(_, cc)| c.divides(cc)) {
                return None;
            }
            let inv = m.inv();
            return Some(Poly {
                terms: self
                    .terms
                    .iter()
                    .map(|(mm, cc)| (mm.mul(&inv), cc.div_exact(c)))
                    .collect(),
            });
        }
        let (dm, dc) = d.lead().clone();
        let low = self.terms.last().unwrap().0.degree() - d.terms.last().unwrap().0.degree();
        let mut rem = self.clone();
        let mut quot: Vec<(Mono, Int)> = Vec::new();
        while !rem.is_zero() {
            let (rm, rc) = rem.lead().clone();
            if !dc.divides(&rc) {
                return None;
            }
            let qm = rm.div(&dm);
            if qm.degree() < low {
                return None;
            }
            let qc = rc.div_exact(&dc);
            rem = rem.sub(&d.mul_term(&qm, &qc));
            quot.push((qm, qc));
        }
        Some(Poly::from_terms(quot))
    }

    /// Evaluate with a callback giving the value of `s^e` for each symbol;
    /// used by substitution.
    pub fn map_terms<T, F>(&self, zero: T, mut f: F) -> T
    where
        F: FnMut(T, &Mono, &Int) -> T,
    {
        let mut acc = zero;
        for (m, c) in &self.terms {
            acc = f(acc, m, c);
        }
        acc
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// ---------------------------------------------------------------------------
// GCD
// ---------------------------------------------------------------------------

/// Normalize a gcd candidate: strip monomial factors and make the leading
/// coefficient positive.
fn unit_normal(p: Poly) -> Poly {
    if p.is_zero() {
        return p;
    }
    let p = p.div_mono(&p.min_mono());
    if p.lead().1.is_negative() {
        p.neg()
    } else {
        p
    }
}

/// Greatest common divisor in ℤ[x^{±1}]: the result has no monomial factor
/// and a positive leading coefficient.  `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return unit_normal(b.clone());
    }
    if b.is_zero() {
        return unit_normal(a.clone());
    }
    let a = unit_normal(a.clone());
    let b = unit_normal(b.clone());
    if a == b {
        return a;
    }
    let ca = a.content();
    let cb = b.content();
    let g = ca.gcd(&cb);
    if a.is_monomial() || b.is_monomial() {
        return Poly::constant(g);
    }
    let a = a.div_int_exact(&ca);
    let b = b.div_int_exact(&cb);
    let core = gcd_primitive(&a, &b);
    unit_normal(core.mul_int(&g))
}

/// gcd of two unit-normal polynomials with content 1 (result also has
/// content 1 up to sign).
fn gcd_primitive(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.clone();
    }
    let va = a.symbols();
    let vb = b.symbols();
    // A variable present in only one argument: the gcd is free of it, so it
    // divides every coefficient with respect to that variable.
    if let Some(s) = va.iter().find(|s| !vb.contains(s)) {
        return gcd_with_coeffs(b, a, *s);
    }
    if let Some(s) = vb.iter().find(|s| !va.contains(s)) {
        return gcd_with_coeffs(a, b, *s);
    }
    // Same variable set: primitive PRS in the variable of least degree.
    let s = *va
        .iter()
        .min_by_key(|s| a.degree_in(**s).min(b.degree_in(**s)))
        .unwrap();
    let (ca, pa) = content_in(a, s);
    let (cb, pb) = content_in(b, s);
    let c = gcd(&ca, &cb);
    let (mut x, mut y) = if pa.degree_in(s) >= pb.degree_in(s) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    loop {
        if y.is_zero() {
            break;
        }
        if y.degree_in(s) == 0 {
            // y is free of s; since x and y are primitive in s the gcd is 1
            // in s-degree, contributing nothing beyond the content.
            x = Poly::one();
            break;
        }
        let r = pseudo_rem(&x, &y, s);
        if r.is_zero() {
            x = y;
            break;
        }
        let r = unit_normal(r);
        let (_, pr) = content_in(&r, s);
        x = y;
        y = unit_normal(pr);
    }
    let x = unit_normal(x);
    let x = if x.is_constant() {
        Poly::one()
    } else {
        let (_, px) = content_in(&x, s);
        let px = unit_normal(px);
        let cc = px.content();
        px.div_int_exact(&cc)
    };
    unit_normal(x.mul(&c))
}

fn gcd_with_coeffs(free: &Poly, other: &Poly, s: Symbol) -> Poly {
    let mut g = free.clone();
    for (_, c) in other.coeffs_in(s) {
        g = gcd(&g, &c);
        if g.is_constant() {
            return Poly::one();
        }
    }
    g
}

/// Content with respect to `s` (gcd of the coefficients) and primitive part.
fn content_in(p: &Poly, s: Symbol) -> (Poly, Poly) {
    let cs = p.coeffs_in(s);
    let mut g = Poly::zero();
    for (_, c) in &cs {
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    if g.is_one() || g.is_zero() {
        return (Poly::one(), p.clone());
    }
    let parts: Vec<(i16, Poly)> = cs
        .iter()
        .map(|(e, c)| (*e, c.div_exact(&g).expect("content divides coefficient")))
        .collect();
    (g, Poly::from_coeffs(s, &parts))
}

/// Pseudo-remainder of `x` by `y` viewed as polynomials in `s` (with the
/// lowest exponent of `s` shifted to 0).
fn pseudo_rem(x: &Poly, y: &Poly, s: Symbol) -> Poly {
    let ycs = y.coeffs_in(s);
    let ydeg = ycs[0].0;
    let ylow = ycs.last().unwrap().0;
    let ylc = ycs[0].1.clone();
    let ydeg_rel = ydeg - ylow;
    let mut r = x.clone();
    loop {
        if r.is_zero() {
            return r;
        }
        let rcs = r.coeffs_in(s);
        let rdeg = rcs[0].0;
        let rlow = rcs.last().unwrap().0;
        if rdeg - rlow < ydeg_rel {
            return r;
        }
        let rlc = rcs[0].1.clone();
        // r <- ylc * r - rlc * s^(rdeg - ydeg) * y
        let shift = Mono::var(s, rdeg - ydeg);
        let t = y.mul(&rlc).mul_term(&shift, &Int::ONE);
        r = r.mul(&ylc).sub(&t);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffield::symbols::{t_sym, U};

    fn u() -> Poly {
        Poly::monomial(Mono::var(U, 1), Int::ONE)
    }

    fn t(i: usize) -> Poly {
        Poly::monomial(Mono::var(t_sym(i), 1), Int::ONE)
    }

    #[test]
    fn gcd_univariate() {
        let one = Poly::one();
        let a = u().sub(&one).mul(&u().add(&one)); // u^2 - 1
        let b = u().sub(&one).mul(&u().add(&Poly::constant(Int::from(2))));
        assert_eq!(gcd(&a, &b), u().sub(&one));
    }

    #[test]
    fn gcd_multivariate() {
        let one = Poly::one();
        let f = u().mul(&t(1)).add(&one); // u t1 + 1
        let a = f.mul(&u().sub(&t(2)));
        let b = f.mul(&u().add(&t(2))).mul(&f);
        assert_eq!(gcd(&a, &b), f);
    }

    #[test]
    fn exact_division() {
        let one = Poly::one();
        let a = u().pow(4).sub(&one);
        let b = u().pow(2).add(&one);
        let q = a.div_exact(&b).unwrap();
        assert_eq!(q, u().pow(2).sub(&one));
        assert!(a.div_exact(&u().add(&Poly::constant(Int::from(3)))).is_none());
    }
}
