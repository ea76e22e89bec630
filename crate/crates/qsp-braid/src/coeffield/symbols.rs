//! Fixed symbol table for the coefficient field.
//!
//! Symbol ids are assigned by role rather than by first use, so that the
//! monomial order — and therefore every canonical form and report — is
//! independent of evaluation order:
//!
//! * `u` (the square root of `q`) is symbol 0;
//! * `t_i` (with `c_i = t_i^2`) is symbol `i`;
//! * `eta_i` is symbol `ETA_BASE + i`;
//! * `zeta` (a fixed root `ζ_r^{1/(n+1)}` of the rescaling parameter) is
//!   `ZETA`.

/// A coefficient-field indeterminate.
pub type Symbol = u16;

/// `u = q^{1/2}`.
pub const U: Symbol = 0;

/// Largest node index supported for per-node symbols.
pub const MAX_NODE: usize = 63;

const ETA_BASE: Symbol = 64;

/// A root `ζ_r^{1/(n+1)}` of the rescaling parameter `ζ_r`.  The
/// reparametrization map needs fractional powers of `ζ_r` on torus elements
/// outside the root lattice; the constraint `ζ_{τ(r)} = ζ_r^{-1}` is built
/// into how the rescaling family is constructed.
pub const ZETA: Symbol = 200;

/// The parameter symbol `t_i`.
pub fn t_sym(i: usize) -> Symbol {
    assert!((1..=MAX_NODE).contains(&i), "node index {i} out of range");
    i as Symbol
}

/// The rescaling symbol `η_i`.
pub fn eta_sym(i: usize) -> Symbol {
    assert!((1..=MAX_NODE).contains(&i), "node index {i} out of range");
    ETA_BASE + i as Symbol
}

/// Printable name of a symbol.
pub fn symbol_name(s: Symbol) -> String {
    if s == U {
        "u".to_string()
    } else if s == ZETA {
        "zeta".to_string()
    } else if s < ETA_BASE {
        format!("t{s}")
    } else {
        format!("eta{}", s - ETA_BASE)
    }
}

/// Inverse of [`symbol_name`].
pub fn symbol_from_name(name: &str) -> Option<Symbol> {
    if name == "u" {
        return Some(U);
    }
    if name == "zeta" {
        return Some(ZETA);
    }
    if let Some(rest) = name.strip_prefix("eta") {
        let i: usize = rest.parse().ok()?;
        if (1..=MAX_NODE).contains(&i) {
            return Some(eta_sym(i));
        }
        return None;
    }
    if let Some(rest) = name.strip_prefix('t') {
        let i: usize = rest.parse().ok()?;
        if (1..=MAX_NODE).contains(&i) {
            return Some(t_sym(i));
        }
    }
    None
}
