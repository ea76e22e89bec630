//! The coefficient field ℚ(u, t_1, …) with u = q^{1/2}.
//!
//! A [`FieldElem`] is a fraction `num / den` of Laurent polynomials with
//! integer coefficients in a canonical reduced form:
//!
//! * `den` is an honest polynomial with no monomial factor and a positive
//!   leading coefficient (negative exponents live in `num`);
//! * `gcd(num, den) = 1` in ℤ[x^{±1}], integer content included.
//!
//! This representation is unique, so equality of field elements is
//! structural equality.  Working over ℤ with a joint content condition is
//! equivalent to the "monic denominator over ℚ" normalization; it avoids
//! rational coefficients entirely.

mod int;
mod poly;
pub mod symbols;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

pub use int::Int;
pub use poly::{gcd, Mono, Poly};
pub use symbols::{eta_sym, symbol_from_name, symbol_name, t_sym, Symbol, MAX_NODE, U, ZETA};

/// Errors raised by field arithmetic.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero in the coefficient field")]
    DivisionByZero,
    #[error("cannot bind symbol {0} to zero: it occurs with a negative exponent")]
    ZeroBinding(String),
    #[error("the symbol u (= q^1/2) cannot be specialized")]
    BindsU,
}

/// An element of the coefficient field in canonical reduced form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    num: Poly,
    den: Poly,
}

impl Default for FieldElem {
    fn default() -> Self {
        FieldElem::zero()
    }
}

impl FieldElem {
    // -----------------------------------------------------------------
    // Constructors
    // -----------------------------------------------------------------

    pub fn zero() -> FieldElem {
        FieldElem {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> FieldElem {
        FieldElem::from_int(1)
    }

    pub fn from_int(c: i64) -> FieldElem {
        FieldElem {
            num: Poly::constant(Int::from(c)),
            den: Poly::one(),
        }
    }

    /// A Laurent polynomial as a field element (already canonical).
    pub fn from_poly(p: Poly) -> FieldElem {
        FieldElem {
            num: p,
            den: Poly::one(),
        }
    }

    /// `c * s^e`.
    pub fn monomial(s: Symbol, e: i16, c: i64) -> FieldElem {
        FieldElem::from_poly(Poly::monomial(Mono::var(s, e), Int::from(c)))
    }

    /// The symbol `s`.
    pub fn sym(s: Symbol) -> FieldElem {
        FieldElem::monomial(s, 1, 1)
    }

    /// `u = q^{1/2}`.
    pub fn u() -> FieldElem {
        FieldElem::sym(U)
    }

    /// `q^k = u^{2k}`.
    pub fn q_pow(k: i32) -> FieldElem {
        FieldElem::monomial(U, (2 * k) as i16, 1)
    }

    /// `q`.
    pub fn q() -> FieldElem {
        FieldElem::q_pow(1)
    }

    /// `q - q^{-1}`.
    pub fn q_minus_qinv() -> FieldElem {
        FieldElem::q().sub(&FieldElem::q_pow(-1))
    }

    /// `q + q^{-1}`.
    pub fn q_plus_qinv() -> FieldElem {
        FieldElem::q().add(&FieldElem::q_pow(-1))
    }

    /// Build from numerator and denominator, canonicalizing.
    pub fn from_fraction(num: Poly, den: Poly) -> Result<FieldElem, FieldError> {
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(FieldElem::canonical(num, den))
    }

    fn canonical(num: Poly, den: Poly) -> FieldElem {
        if num.is_zero() {
            return FieldElem::zero();
        }
        let m = den.min_mono();
        let (num, den) = if m.is_one() {
            (num, den)
        } else {
            (num.div_mono(&m), den.div_mono(&m))
        };
        if den.is_monomial() {
            // Denominator is an integer constant after stripping monomials.
            let c = den.lead().1.clone();
            let g = num.content().gcd(&c);
            let (num, c) = (num.div_int_exact(&g), c.div_exact(&g));
            let (num, c) = if c.is_negative() {
                (num.neg(), -c)
            } else {
                (num, c)
            };
            return FieldElem {
                num,
                den: Poly::constant(c),
            };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        if den.lead().1.is_negative() {
            FieldElem {
                num: num.neg(),
                den: den.neg(),
            }
        } else {
            FieldElem { num, den }
        }
    }

    // -----------------------------------------------------------------
    // Accessors
    // -----------------------------------------------------------------

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True if the element is a Laurent polynomial (denominator 1).
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// All symbols occurring in numerator or denominator.
    pub fn symbols(&self) -> Vec<Symbol> {
        let mut s = self.num.symbols();
        for x in self.den.symbols() {
            if !s.contains(&x) {
                s.push(x);
            }
        }
        s.sort();
        s
    }

    // -----------------------------------------------------------------
    // Arithmetic
    // -----------------------------------------------------------------

    pub fn neg(&self) -> FieldElem {
        FieldElem {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, o: &FieldElem) -> FieldElem {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        if self.den.is_one() && o.den.is_one() {
            return FieldElem::from_poly(self.num.add(&o.num));
        }
        if self.den == o.den {
            let s = self.num.add(&o.num);
            return FieldElem::canonical(s, self.den.clone());
        }
        // Henrici: with g = gcd(b, d), a/b + c/d = (a d' + c b') / (g b' d')
        // and only the factor g can share anything with the numerator.
        let g = if self.den.is_one() || o.den.is_one() {
            Poly::one()
        } else {
            gcd(&self.den, &o.den)
        };
        let b1 = self.den.div_exact(&g).expect("gcd divides");
        let d1 = o.den.div_exact(&g).expect("gcd divides");
        let num = self.num.mul(&d1).add(&o.num.mul(&b1));
        if num.is_zero() {
            return FieldElem::zero();
        }
        let den = b1.mul(&d1).mul(&g);
        if g.is_one() {
            let c = FieldElem { num, den };
            return c.fix_sign_and_content();
        }
        FieldElem::canonical(num, den)
    }

    /// After a coprime-denominator addition the polynomial gcd is 1, but the
    /// integer contents may still share a factor.
    fn fix_sign_and_content(self) -> FieldElem {
        let cd = self.den.content();
        let g = self.num.content().gcd(&cd);
        let (num, den) = if g.is_one() {
            (self.num, self.den)
        } else {
            (self.num.div_int_exact(&g), self.den.div_int_exact(&g))
        };
        if den.lead().1.is_negative() {
            FieldElem {
                num: num.neg(),
                den: den.neg(),
            }
        } else {
            FieldElem { num, den }
        }
    }

    pub fn sub(&self, o: &FieldElem) -> FieldElem {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &FieldElem) -> FieldElem {
        if self.is_zero() || o.is_zero() {
            return FieldElem::zero();
        }
        if o.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return o.clone();
        }
        if self.den.is_one() && o.den.is_one() {
            return FieldElem::from_poly(self.num.mul(&o.num));
        }
        // Cross-cancel: gcd(a, d) and gcd(c, b).
        let (a, d) = cancel(&self.num, &o.den);
        let (c, b) = cancel(&o.num, &self.den);
        let num = a.mul(&c);
        let den = b.mul(&d);
        FieldElem { num, den }.fix_sign_and_content()
    }

    /// Scale by an integer.
    pub fn mul_int(&self, k: i64) -> FieldElem {
        self.mul(&FieldElem::from_int(k))
    }

    pub fn inv(&self) -> Result<FieldElem, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(FieldElem::canonical(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &FieldElem) -> Result<FieldElem, FieldError> {
        Ok(self.mul(&o.inv()?))
    }

    /// Integer power (negative exponents invert).
    pub fn pow(&self, e: i32) -> Result<FieldElem, FieldError> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        if self.den.is_one() && self.num.is_monomial() {
            let (m, c) = self.num.lead();
            return Ok(FieldElem::from_poly(Poly::monomial(
                m.pow(e as i16),
                c.pow(e as u32),
            )));
        }
        Ok(FieldElem {
            num: self.num.pow(e as u32),
            den: self.den.pow(e as u32),
        })
    }

    /// Apply one of the four field operations by name.
    pub fn arith(&self, o: &FieldElem, op: FieldOp) -> Result<FieldElem, FieldError> {
        Ok(match op {
            FieldOp::Add => self.add(o),
            FieldOp::Sub => self.sub(o),
            FieldOp::Mul => self.mul(o),
            FieldOp::Div => self.div(o)?,
        })
    }

    // -----------------------------------------------------------------
    // Substitution
    // -----------------------------------------------------------------

    /// Substitute parameter symbols by field elements and re-canonicalize.
    pub fn specialize(&self, bindings: &HashMap<Symbol, FieldElem>) -> Result<FieldElem, FieldError> {
        if bindings.contains_key(&U) {
            return Err(FieldError::BindsU);
        }
        if bindings.is_empty() {
            return Ok(self.clone());
        }
        let n = subst_poly(&self.num, bindings)?;
        let d = subst_poly(&self.den, bindings)?;
        n.div(&d)
    }

    /// The ring embedding `s ↦ s^k` (k ≥ 1): every exponent of `s` is
    /// multiplied by `k`.  Used to adjoin a root of `s` by reinterpreting
    /// the symbol.
    pub fn inflate(&self, s: Symbol, k: i16) -> FieldElem {
        assert!(k >= 1, "inflation factor must be positive");
        let f = |p: &Poly| {
            Poly::from_terms(
                p.terms()
                    .iter()
                    .map(|(m, c)| {
                        let mono = m.vars().fold(Mono::one(), |acc, (t, e)| acc.mul(&Mono::var(t, if t == s { e * k } else { e })));
                        (mono, c.clone())
                    })
                    .collect(),
            )
        };
        FieldElem::from_fraction(f(&self.num), f(&self.den)).expect("inflation keeps the denominator nonzero")
    }

    /// Evaluate modulo a prime at given symbol values (used by randomized
    /// cross-checks).  Returns `None` if the denominator vanishes.
    pub fn eval_mod(&self, p: u64, values: &dyn Fn(Symbol) -> u64) -> Option<u64> {
        let n = eval_poly_mod(&self.num, p, values)?;
        let d = eval_poly_mod(&self.den, p, values)?;
        if d == 0 {
            return None;
        }
        Some(mul_mod(n, pow_mod(d, p - 2, p), p))
    }
}

/// The four field operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

fn cancel(a: &Poly, d: &Poly) -> (Poly, Poly) {
    if d.is_one() {
        return (a.clone(), d.clone());
    }
    let g = gcd(a, d);
    if g.is_one() {
        return (a.clone(), d.clone());
    }
    (
        a.div_exact(&g).expect("gcd divides"),
        d.div_exact(&g).expect("gcd divides"),
    )
}

fn subst_poly(p: &Poly, bindings: &HashMap<Symbol, FieldElem>) -> Result<FieldElem, FieldError> {
    let mut acc = FieldElem::zero();
    for (m, c) in p.terms() {
        let mut rest = Mono::one();
        let mut factor = FieldElem::from_poly(Poly::constant(c.clone()));
        for (s, e) in m.vars() {
            match bindings.get(&s) {
                Some(v) => {
                    if v.is_zero() {
                        if e < 0 {
                            return Err(FieldError::ZeroBinding(symbol_name(s)));
                        }
                        factor = FieldElem::zero();
                    } else {
                        factor = factor.mul(&v.pow(e as i32)?);
                    }
                }
                None => rest = rest.mul(&Mono::var(s, e)),
            }
        }
        let term = factor.mul(&FieldElem::from_poly(Poly::monomial(rest, Int::ONE)));
        acc = acc.add(&term);
    }
    Ok(acc)
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

fn eval_poly_mod(poly: &Poly, p: u64, values: &dyn Fn(Symbol) -> u64) -> Option<u64> {
    let mut acc = 0u64;
    for (m, c) in poly.terms() {
        let mut t = c.mod_u64(p);
        for (s, e) in m.vars() {
            let v = values(s) % p;
            if v == 0 {
                if e < 0 {
                    return None;
                }
                t = 0;
                continue;
            }
            let base = if e < 0 { pow_mod(v, p - 2, p) } else { v };
            t = mul_mod(t, pow_mod(base, e.unsigned_abs() as u64, p), p);
        }
        acc = (acc + t) % p;
    }
    Some(acc)
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap_num = self.num.len() > 1 && !self.den.is_one();
        if wrap_num {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        if !self.den.is_one() {
            if self.den.len() > 1 {
                write!(f, "/({})", self.den)?;
            } else {
                write!(f, "/{}", self.den)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(i: usize) -> FieldElem {
        FieldElem::sym(t_sym(i))
    }

    #[test]
    fn c_constant_normalizes_to_one() {
        // C = u^{-1} t_r^{-1} t_{τr}^{-1}; C^2 q c_r c_{τr} = 1.
        let (r, tr) = (2, 4);
        let c = FieldElem::u()
            .mul(&t(r))
            .mul(&t(tr))
            .inv()
            .unwrap();
        let cr = t(r).pow(2).unwrap();
        let ctr = t(tr).pow(2).unwrap();
        let prod = c.mul(&c).mul(&FieldElem::q()).mul(&cr).mul(&ctr);
        assert!(prod.is_one());
    }

    #[test]
    fn q_minus_qinv_inverse_is_canonical() {
        let d = FieldElem::q_minus_qinv();
        let inv = d.inv().unwrap();
        // u^2 / (u^4 - 1)
        assert_eq!(inv.to_string(), "u^2/(u^4 - 1)");
        assert!(d.mul(&inv).is_one());
    }

    #[test]
    fn sums_cancel_denominators() {
        let d = FieldElem::q_minus_qinv().inv().unwrap();
        let x = d.mul(&FieldElem::q()).sub(&d.mul(&FieldElem::q_pow(-1)));
        assert!(x.is_one());
    }

    #[test]
    fn specialize_c() {
        let (r, tr) = (2, 4);
        let c = FieldElem::u().mul(&t(r)).mul(&t(tr)).inv().unwrap();
        let mut b = HashMap::new();
        b.insert(t_sym(tr), t(r));
        let s = c.specialize(&b).unwrap();
        let expect = FieldElem::u().mul(&t(r).pow(2).unwrap()).inv().unwrap();
        assert_eq!(s, expect);
        let diff = t(r).pow(2).unwrap().sub(&t(tr).pow(2).unwrap());
        assert!(diff.specialize(&b).unwrap().is_zero());
    }

    #[test]
    fn zero_binding_rejected() {
        let x = t(1).inv().unwrap();
        let mut b = HashMap::new();
        b.insert(t_sym(1), FieldElem::zero());
        assert!(matches!(x.specialize(&b), Err(FieldError::ZeroBinding(_))));
        b.clear();
        b.insert(U, FieldElem::one());
        assert_eq!(x.specialize(&b), Err(FieldError::BindsU));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            FieldElem::one().div(&FieldElem::zero()),
            Err(FieldError::DivisionByZero)
        );
    }
}
