//! Canonical text rendering in the operator-language expression syntax.

use std::fmt;

use num_traits::{One, Signed};

use super::{DiffPolynomial, JetVar, Monomial, Rational};

const AXIS_LETTERS: [char; 3] = ['x', 'y', 'z'];

/// Renders `∂^α u_i`: `dxy(u)`, `d[1,0,0,2](u[3])`, or a bare `u[2]` for
/// order zero. The component is omitted for scalar symbols.
pub fn render_jet_var(v: &JetVar, arity: usize) -> String {
    let fref = if arity == 1 {
        v.symbol.to_string()
    } else {
        format!("{}[{}]", v.symbol, v.component)
    };
    if v.index.is_zero() {
        return fref;
    }
    if v.index.dim() <= AXIS_LETTERS.len() {
        let mut s = String::from("d");
        for (axis, &e) in v.index.exponents().iter().enumerate() {
            for _ in 0..e {
                s.push(AXIS_LETTERS[axis]);
            }
        }
        format!("{s}({fref})")
    } else {
        format!("d{}({fref})", v.index)
    }
}

pub fn render_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl DiffPolynomial {
    pub fn render_monomial(&self, m: &Monomial) -> String {
        m.factors()
            .iter()
            .map(|(v, e)| {
                let base = render_jet_var(v, self.arity(&v.symbol).unwrap_or(v.component.max(2)));
                if *e == 1 {
                    base
                } else {
                    format!("{base}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl fmt::Display for DiffPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            let body = self.render_monomial(m);
            if body.is_empty() {
                f.write_str(&render_rational(&mag))?;
            } else if mag.is_one() {
                f.write_str(&body)?;
            } else {
                write!(f, "{}*{}", render_rational(&mag), body)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for JetVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_jet_var(self, usize::MAX))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors().is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .factors()
            .iter()
            .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::super::test_util::*;
    use super::super::{int, rat};

    #[test]
    fn renders_expression_syntax() {
        let j = var("u", 2, 1, &[1, 0])
            .mul(&var("u", 2, 2, &[0, 1]))
            .unwrap()
            .sub(&var("u", 2, 1, &[0, 1]).mul(&var("u", 2, 2, &[1, 0])).unwrap())
            .unwrap();
        assert_eq!(j.to_string(), "dx(u[1])*dy(u[2]) - dy(u[1])*dx(u[2])");

        let p = var("u", 1, 1, &[2, 0]).scale(&rat(-1, 2)).add(&var("u", 1, 1, &[0, 0])).unwrap();
        assert_eq!(p.to_string(), "u - 1/2*dxx(u)");

        let sq = var("v", 1, 1, &[0, 1, 1]).pow(2).unwrap().scale(&int(3));
        assert_eq!(sq.to_string(), "3*dyz(v)^2");

        let hi = var("w", 1, 1, &[1, 0, 0, 2]);
        assert_eq!(hi.to_string(), "d[1,0,0,2](w)");
    }
}
