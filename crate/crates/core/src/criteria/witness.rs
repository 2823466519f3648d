//! Jet-point witnesses for nonvanishing Euler residuals.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diffpoly::render::render_rational;
use crate::diffpoly::{int, DiffPolynomial, JetVar, Rational, Symbol};
use crate::multiindex::MultiIndex;

/// A jet point at which the Euler residual `E_{symbol,component}` is nonzero,
/// plus a polynomial realization of that jet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub residual_symbol: Symbol,
    pub residual_component: usize,
    pub residual: DiffPolynomial,
    /// Values for every jet variable of the residual (unlisted ones are 0).
    pub assignment: BTreeMap<JetVar, Rational>,
    pub value: Rational,
    /// Human-readable Taylor polynomials realizing the jet at the origin.
    pub realization: String,
}

const RANDOM_TRIES: usize = 256;

impl Witness {
    pub fn from_residual(symbol: Symbol, component: usize, residual: DiffPolynomial) -> Witness {
        let vars = residual.jet_vars();
        let base: BTreeMap<JetVar, Rational> = vars.iter().map(|v| (v.clone(), Rational::zero())).collect();

        // A monomial whose variable set is inclusion-minimal: setting exactly
        // those variables leaves a nonzero polynomial in them.
        let support = residual
            .terms()
            .map(|(m, _)| m.vars().cloned().collect::<Vec<_>>())
            .min_by_key(|s| s.len())
            .unwrap_or_default();

        let mut assignment = base.clone();
        for v in &support {
            assignment.insert(v.clone(), Rational::one());
        }
        let mut value = residual.evaluate_at_jet(&assignment).expect("assignment covers residual");

        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let mut tries = 0;
        while value.is_zero() && tries < RANDOM_TRIES && !residual.is_zero() {
            // Small nonzero integers on the support first, then everywhere.
            let pool: &[JetVar] = if tries < RANDOM_TRIES / 2 { &support } else { &vars };
            assignment = base.clone();
            for v in pool {
                let mut k: i64 = rng.gen_range(-3..=3);
                if k == 0 {
                    k = 1;
                }
                assignment.insert(v.clone(), int(k));
            }
            value = residual.evaluate_at_jet(&assignment).expect("assignment covers residual");
            tries += 1;
        }

        let realization = realize(&assignment, residual.dim());
        Witness {
            residual_symbol: symbol,
            residual_component: component,
            residual,
            assignment,
            value,
            realization,
        }
    }

    /// Taylor coefficients `a_α / α!` per `(symbol, component)`.
    pub fn taylor_coefficients(&self) -> BTreeMap<(Symbol, usize), Vec<(MultiIndex, Rational)>> {
        taylor(&self.assignment)
    }

    /// Re-evaluates the residual at the stored jet point.
    pub fn recheck(&self) -> bool {
        self.residual
            .evaluate_at_jet(&self.assignment)
            .map(|v| v == self.value && !v.is_zero())
            .unwrap_or(false)
    }
}

fn taylor(assignment: &BTreeMap<JetVar, Rational>) -> BTreeMap<(Symbol, usize), Vec<(MultiIndex, Rational)>> {
    let mut out: BTreeMap<(Symbol, usize), Vec<(MultiIndex, Rational)>> = BTreeMap::new();
    for (v, a) in assignment {
        if a.is_zero() {
            continue;
        }
        let coeff = a / Rational::from_integer(v.index.factorial());
        out.entry((v.symbol.clone(), v.component)).or_default().push((v.index, coeff));
    }
    out
}

fn monomial_text(alpha: &MultiIndex) -> String {
    let names: Vec<String> = if alpha.dim() <= 3 {
        ["x", "y", "z"][..alpha.dim()].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=alpha.dim()).map(|k| format!("x{k}")).collect()
    };
    let parts: Vec<String> = alpha
        .exponents()
        .iter()
        .zip(&names)
        .filter(|(e, _)| **e > 0)
        .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
        .collect();
    parts.join("*")
}

fn realize(assignment: &BTreeMap<JetVar, Rational>, dim: usize) -> String {
    let polys = taylor(assignment);
    if polys.is_empty() {
        return format!("all functions vanish near the origin (dimension {dim})");
    }
    let mut lines = Vec::new();
    for ((s, i), terms) in &polys {
        let mut text = String::new();
        for (k, (alpha, c)) in terms.iter().enumerate() {
            let mono = monomial_text(alpha);
            let sign = if c.is_negative() { "-" } else { "+" };
            if k == 0 {
                if c.is_negative() {
                    text.push('-');
                }
            } else {
                text.push_str(&format!(" {sign} "));
            }
            let mag = c.abs();
            match (mono.is_empty(), mag.is_one()) {
                (true, _) => text.push_str(&render_rational(&mag)),
                (false, true) => text.push_str(&mono),
                (false, false) => text.push_str(&format!("{}*{}", render_rational(&mag), mono)),
            }
        }
        lines.push(format!("{s}[{i}] = {text}"));
    }
    format!("{}; each multiplied by a cutoff equal to 1 near the origin", lines.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opdsl::parse;

    #[test]
    fn witness_for_mixed_second_derivative() {
        let p = parse(r#"operator "w" { dims 2; functions u: R^1, v: R^1; expr = dx(u)*dy(v); }"#).unwrap();
        let r = p.body.euler_operator(&Symbol::new("u"), 1).unwrap();
        let w = Witness::from_residual(Symbol::new("u"), 1, r);
        assert_eq!(w.value, int(-1));
        assert!(w.recheck());
        assert_eq!(w.realization, "v[1] = x*y; each multiplied by a cutoff equal to 1 near the origin");
    }

    #[test]
    fn cancelling_support_falls_back_to_random_values() {
        // v_xx^2 - v_xx vanishes at v_xx = 1.
        let p = parse(r#"operator "c" { dims 2; functions v: R^1; expr = dxx(v)^2 - dxx(v); }"#).unwrap();
        let w = Witness::from_residual(Symbol::new("v"), 1, p.body.clone());
        assert!(!w.value.is_zero());
        assert!(w.recheck());
    }
}
