//! Second-order forward-mode differentiation in three variables, used to
//! evaluate differential expressions of closed-form fields exactly (no grid
//! aliasing), and the small real-number trait shared with `f64`.

use std::collections::BTreeMap;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::ToPrimitive;

use crate::diffpoly::{DiffPolynomial, Symbol};

/// Scalars supporting the operations used by closed-form test fields.
pub trait Real:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    fn constant(c: f64) -> Self;
    fn value(&self) -> f64;
    fn exp(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
}

impl Real for f64 {
    fn constant(c: f64) -> Self {
        c
    }
    fn value(&self) -> f64 {
        *self
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
}

/// Value, gradient and Hessian of a function of `(x, y, z)` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    pub v: f64,
    pub g: [f64; 3],
    pub h: [[f64; 3]; 3],
}

impl Jet2 {
    /// The coordinate function `x_axis` at `point`.
    pub fn variable(point: &[f64; 3], axis: usize) -> Jet2 {
        let mut g = [0.0; 3];
        g[axis] = 1.0;
        Jet2 {
            v: point[axis],
            g,
            h: [[0.0; 3]; 3],
        }
    }

    /// `f ∘ self` for a scalar function with derivatives `(f, f', f'')`.
    fn chain(self, f0: f64, f1: f64, f2: f64) -> Jet2 {
        let mut out = Jet2 {
            v: f0,
            g: [0.0; 3],
            h: [[0.0; 3]; 3],
        };
        for i in 0..3 {
            out.g[i] = f1 * self.g[i];
            for j in 0..3 {
                out.h[i][j] = f1 * self.h[i][j] + f2 * self.g[i] * self.g[j];
            }
        }
        out
    }

    /// Derivative along a multi-index of order at most two (exponents per
    /// axis).
    pub fn derivative(&self, exps: &[u8]) -> Option<f64> {
        let axes: Vec<usize> = exps
            .iter()
            .enumerate()
            .flat_map(|(a, &e)| std::iter::repeat_n(a, e as usize))
            .collect();
        match axes.as_slice() {
            [] => Some(self.v),
            [a] => Some(self.g[*a]),
            [a, b] => Some(self.h[*a][*b]),
            _ => None,
        }
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        let mut out = self;
        out.v += o.v;
        for i in 0..3 {
            out.g[i] += o.g[i];
            for j in 0..3 {
                out.h[i][j] += o.h[i][j];
            }
        }
        out
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self * Jet2::constant(-1.0)
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        self + (-o)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        let mut out = Jet2::constant(self.v * o.v);
        for i in 0..3 {
            out.g[i] = self.g[i] * o.v + self.v * o.g[i];
            for j in 0..3 {
                out.h[i][j] =
                    self.h[i][j] * o.v + self.g[i] * o.g[j] + self.g[j] * o.g[i] + self.v * o.h[i][j];
            }
        }
        out
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    fn div(self, o: Jet2) -> Jet2 {
        let inv = 1.0 / o.v;
        self * o.chain(inv, -inv * inv, 2.0 * inv * inv * inv)
    }
}

impl Real for Jet2 {
    fn constant(c: f64) -> Self {
        Jet2 {
            v: c,
            g: [0.0; 3],
            h: [[0.0; 3]; 3],
        }
    }
    fn value(&self) -> f64 {
        self.v
    }
    fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }
    fn sin(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(s, c, -s)
    }
    fn cos(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(c, -s, -c)
    }
}

/// Evaluates a body of order at most two at one point, given the jet of
/// every symbol component there. `None` if a component is missing or the
/// body has higher order.
pub fn evaluate_body(body: &DiffPolynomial, jets: &BTreeMap<(Symbol, usize), Jet2>) -> Option<f64> {
    let mut total = 0.0;
    for (m, c) in body.terms() {
        let mut t = c.to_f64()?;
        for (v, e) in m.factors() {
            let j = jets.get(&(v.symbol.clone(), v.component))?;
            t *= j.derivative(v.index.exponents())?.powi(*e as i32);
        }
        total += t;
    }
    Some(total)
}
