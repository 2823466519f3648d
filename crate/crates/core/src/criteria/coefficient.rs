//! Coefficient-level criteria on multilinear tables.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::{parity_sign, refuted, CriteriaError, Method, Verdict};
use crate::diffpoly::Rational;
use crate::multiindex::{binomial, MultiIndex};
use crate::opdsl::{CoefficientTable, Slot};

fn label(slots: &[Slot], components: &[usize]) -> String {
    slots
        .iter()
        .zip(components)
        .map(|(s, &c)| format!("{}[{}]", s.symbol, match s.kind {
            crate::opdsl::SlotKind::Symbol => c,
            crate::opdsl::SlotKind::Component(i) => i,
        }))
        .collect::<Vec<_>>()
        .join(",")
}

fn sum_indices(indices: &[MultiIndex]) -> MultiIndex {
    indices
        .iter()
        .skip(1)
        .fold(indices[0], |acc, a| acc.add(a).expect("orders bounded by table"))
}

fn finish(table: &CoefficientTable, method: Method, sums: BTreeMap<String, Rational>) -> Result<Verdict, CriteriaError> {
    let details: BTreeMap<String, Rational> = sums.into_iter().filter(|(_, v)| !v.is_zero()).collect();
    if details.is_empty() {
        Ok(Verdict::holds(method))
    } else {
        refuted(&table.to_body(), method, details)
    }
}

fn require(cond: bool, expected: &str, found: impl FnOnce() -> String) -> Result<(), CriteriaError> {
    if cond {
        Ok(())
    } else {
        Err(CriteriaError::WrongShape {
            expected: expected.to_string(),
            found: found(),
        })
    }
}

/// `Σ_{α+β=γ} (−1)^{|α|} c_{i,j,α,β} = 0` for all `i, j, γ`.
pub fn bilinear_criterion(table: &CoefficientTable) -> Result<Verdict, CriteriaError> {
    require(table.rank() == 2, "a bilinear table", || format!("{} slots", table.rank()))?;
    require(table.is_unconstrained(), "unconstrained slots", || "constrained slots".into())?;
    let mut sums = BTreeMap::new();
    for (k, c) in table.entries() {
        let gamma = sum_indices(&k.indices);
        let key = format!("{} gamma={}", label(table.slots(), &k.components), gamma);
        *sums.entry(key).or_insert_with(Rational::zero) += parity_sign(k.indices[0].order()) * c;
    }
    finish(table, Method::CoefficientCriterion, sums)
}

/// Unsigned sums `Σ_{α+β=γ} c_{i,j,α,β} = 0`, valid for slot-homogeneous
/// bilinear tables.
pub fn homogeneous_criterion(table: &CoefficientTable) -> Result<Verdict, CriteriaError> {
    require(table.rank() == 2, "a bilinear table", || format!("{} slots", table.rank()))?;
    require(table.is_unconstrained(), "unconstrained slots", || "constrained slots".into())?;
    require(table.is_slot_homogeneous(), "slot-homogeneous orders", || "mixed orders in a slot".into())?;
    let mut sums = BTreeMap::new();
    for (k, c) in table.entries() {
        let gamma = sum_indices(&k.indices);
        let key = format!("{} gamma={}", label(table.slots(), &k.components), gamma);
        *sums.entry(key).or_insert_with(Rational::zero) += c;
    }
    finish(table, Method::HomogeneousCriterion, sums)
}

/// All ordered ways to write `gamma` as a sum of `parts` multi-indices.
fn compositions(gamma: &MultiIndex, parts: usize) -> Vec<Vec<MultiIndex>> {
    if parts == 1 {
        return vec![vec![*gamma]];
    }
    let mut out = Vec::new();
    for first in gamma.sub_indices() {
        let rest = gamma.checked_sub(&first).expect("sub-index");
        for mut tail in compositions(&rest, parts - 1) {
            let mut v = vec![first];
            v.append(&mut tail);
            out.push(v);
        }
    }
    out
}

/// Shared driver: for every component tuple `ν`, every `γ` and every
/// `(θ², …, θʳ)` with `Σ θ^j = γ`, sums `weight(α, θ) · c_{ν,α}` over the
/// table entries with `Σ α^j = γ`.
fn theta_sums<W>(table: &CoefficientTable, weight: W) -> BTreeMap<String, Rational>
where
    W: Fn(&[MultiIndex], &[MultiIndex]) -> Rational,
{
    let mut groups: BTreeMap<(Vec<usize>, MultiIndex), Vec<(&[MultiIndex], &Rational)>> = BTreeMap::new();
    for (k, c) in table.entries() {
        groups
            .entry((k.components.clone(), sum_indices(&k.indices)))
            .or_default()
            .push((&k.indices, c));
    }
    let mut sums = BTreeMap::new();
    for ((nu, gamma), entries) in groups {
        for theta in compositions(&gamma, table.rank() - 1) {
            let mut total = Rational::zero();
            for (alpha, c) in &entries {
                let w = weight(alpha, &theta);
                if !w.is_zero() {
                    total += w * *c;
                }
            }
            let theta_text: Vec<String> = theta.iter().map(|t| t.to_string()).collect();
            let key = format!(
                "{} gamma={} theta=({})",
                label(table.slots(), &nu),
                gamma,
                theta_text.join(",")
            );
            sums.insert(key, total);
        }
    }
    sums
}

/// The multilinear coefficient condition with weights
/// `∏_{j≥2} binom(α¹, θ^j − α^j)`, restricted to `α¹ + α^j ≥ θ^j`.
pub fn binomial_product_condition(table: &CoefficientTable) -> Result<Verdict, CriteriaError> {
    require(table.rank() >= 2, "at least two slots", || format!("{} slots", table.rank()))?;
    require(table.is_unconstrained(), "unconstrained slots", || "constrained slots".into())?;
    require(table.is_slot_homogeneous(), "slot-homogeneous orders", || "mixed orders in a slot".into())?;
    let sums = theta_sums(table, |alpha, theta| {
        let mut w = Rational::from_integer(1.into());
        for (a, t) in alpha[1..].iter().zip(theta) {
            let Some(delta) = t.checked_sub(a) else {
                return Rational::zero();
            };
            let b = binomial(&alpha[0], &delta).expect("same dimension");
            if b.is_zero() {
                return Rational::zero();
            }
            w *= Rational::from_integer(b);
        }
        w
    });
    finish(table, Method::BinomialProductCondition, sums)
}

/// Exact multilinear criterion from expanding `D^{α¹}` of the remaining
/// factors by the Leibniz rule: weights are the multinomial coefficients
/// `α¹! / ∏_{j≥2} (θ^j − α^j)!` times `(−1)^{|α¹|}`. Equivalent to the
/// vanishing of the Euler residual of the first slot.
pub fn leibniz_multilinear_criterion(table: &CoefficientTable) -> Result<Verdict, CriteriaError> {
    require(table.rank() >= 2, "at least two slots", || format!("{} slots", table.rank()))?;
    require(table.is_unconstrained(), "unconstrained slots", || "constrained slots".into())?;
    let sums = theta_sums(table, |alpha, theta| {
        let mut denom = num_bigint::BigInt::from(1);
        let mut spent = MultiIndex::zero(alpha[0].dim()).expect("dimension");
        for (a, t) in alpha[1..].iter().zip(theta) {
            let Some(delta) = t.checked_sub(a) else {
                return Rational::zero();
            };
            denom *= delta.factorial();
            spent = spent.add(&delta).expect("bounded");
        }
        if spent != alpha[0] {
            return Rational::zero();
        }
        parity_sign(alpha[0].order()) * Rational::new(alpha[0].factorial(), denom)
    });
    finish(table, Method::LeibnizMultilinear, sums)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opdsl::parse;

    fn table(text: &str) -> CoefficientTable {
        CoefficientTable::from_spec(&parse(text).unwrap()).unwrap()
    }

    #[test]
    fn bilinear_examples() {
        let t = table(r#"operator "a" { dims 2; functions u: R^1, v: R^1; expr = u*dx(v) + dx(u)*v; }"#);
        assert!(bilinear_criterion(&t).unwrap().value);

        let t = table(r#"operator "a" { dims 2; functions u: R^1, v: R^1; expr = dxx(u)*v - dxx(v)*u; }"#);
        assert!(bilinear_criterion(&t).unwrap().value);

        let t = table(r#"operator "a" { dims 2; functions u: R^1, v: R^1; expr = u*dx(v) - dx(u)*v; }"#);
        let v = bilinear_criterion(&t).unwrap();
        assert!(!v.value);
        assert_eq!(v.details.values().next().unwrap(), &crate::diffpoly::int(2));
        assert!(v.witness.unwrap().recheck());
    }

    #[test]
    fn homogeneous_examples() {
        let t = table(
            r#"operator "ma" { dims 2; functions u: R^1, v: R^1; expr = dxx(u)*dyy(v) + dyy(u)*dxx(v) - 2*dxy(u)*dxy(v); }"#,
        );
        assert!(homogeneous_criterion(&t).unwrap().value);
        let t = table(r#"operator "j" { dims 2; functions u: R^2; expr = dx(u[1])*dy(u[2]) - dy(u[1])*dx(u[2]); }"#);
        assert!(homogeneous_criterion(&t).unwrap().value);
        let t = table(r#"operator "a" { dims 2; functions u: R^1, v: R^1; expr = dxx(u)*dyy(v); }"#);
        assert!(!homogeneous_criterion(&t).unwrap().value);
        let t = table(r#"operator "a" { dims 2; functions u: R^1, v: R^1; expr = dxx(u)*v + u*v; }"#);
        assert!(homogeneous_criterion(&t).is_err());
    }

    #[test]
    fn trilinear_examples() {
        let t = table(
            r#"operator "d" { dims 2; functions u: R^1, v: R^1, w: R^1; expr = dx(u)*v*w + u*dx(v)*w + u*v*dx(w); }"#,
        );
        assert!(leibniz_multilinear_criterion(&t).unwrap().value);
        // Not slot-homogeneous, so only the Leibniz form applies.
        assert!(binomial_product_condition(&t).is_err());

        let t = table(r#"operator "s" { dims 2; functions u: R^1, v: R^1, w: R^1; expr = dx(u)*v*w; }"#);
        assert!(!binomial_product_condition(&t).unwrap().value);
        assert!(!leibniz_multilinear_criterion(&t).unwrap().value);

        let t = table(
            r#"operator "j3" { dims 3; functions u: R^3;
               expr = dx(u[1])*dy(u[2])*dz(u[3]) - dx(u[1])*dz(u[2])*dy(u[3]) - dy(u[1])*dx(u[2])*dz(u[3])
                    + dy(u[1])*dz(u[2])*dx(u[3]) + dz(u[1])*dx(u[2])*dy(u[3]) - dz(u[1])*dy(u[2])*dx(u[3]); }"#,
        );
        assert!(binomial_product_condition(&t).unwrap().value);
        assert!(leibniz_multilinear_criterion(&t).unwrap().value);
    }

    #[test]
    fn compositions_count() {
        let g = MultiIndex::new(&[2, 1]).unwrap();
        // (3 choose 1) * (2 choose 1) ways for two parts: (2+1)(1+1) = 6.
        assert_eq!(compositions(&g, 2).len(), 6);
        assert_eq!(compositions(&g, 1), vec![vec![g]]);
    }
}
