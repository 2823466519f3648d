//! The bundled operator corpus: classical null forms, constrained
//! div-curl pairings, non-examples with witnesses, and a published operator
//! whose zero-integral claim does not hold.
//!
//! Every file carries `# expect:` directives; `claimed.` keys record
//! published claims, which are reported rather than enforced.

use crate::opdsl::{parse_file, OperatorSpec, ParseError};

macro_rules! corpus_files {
    ($($name:literal),* $(,)?) => {
        /// `(file name, source text)` for every corpus file, sorted by name.
        pub const FILES: &[(&str, &str)] = &[
            $(($name, include_str!(concat!("../corpus/", $name)))),*
        ];
    };
}

corpus_files!(
    "convective.op",
    "cross_derivatives.op",
    "dirichlet.op",
    "div_curl.op",
    "divergence_free_gradient.op",
    "even_difference.op",
    "gradient_pair.op",
    "gradient_transport.op",
    "hessian2.op",
    "hessian3.op",
    "jacobian2.op",
    "jacobian3.op",
    "jacobian3_scalars.op",
    "jacobian_minor3.op",
    "laplacian_pairing.op",
    "mixed_levels.op",
    "monge_ampere.op",
    "odd_sum.op",
    "oscillating_cubic.op",
    "perturbed_hessian.op",
    "product.op",
    "product_derivative.op",
    "product_with_mass.op",
    "second_jacobian.op",
    "solenoidal_pair.op",
    "square_derivative.op",
    "total_derivative.op",
    "weighted_jacobian.op",
    "wronskian.op",
    "zero_operator.op",
);

/// Source text of one corpus file.
pub fn source(file: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == file).map(|(_, t)| *t)
}

/// Every corpus operator, sorted by name.
pub fn load() -> Result<Vec<OperatorSpec>, (String, ParseError)> {
    let mut out = Vec::new();
    for (name, text) in FILES {
        out.extend(parse_file(text).map_err(|e| (name.to_string(), e))?);
    }
    out.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(out)
}

/// One corpus operator by name.
pub fn operator(name: &str) -> Option<OperatorSpec> {
    load().ok()?.into_iter().find(|s| s.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_file_parses_and_names_are_unique() {
        let specs = load().unwrap();
        assert_eq!(specs.len(), FILES.len());
        let mut names: Vec<_> = specs.iter().map(|s| s.name.clone()).collect();
        names.dedup();
        assert_eq!(names.len(), specs.len());
        assert!(operator("jacobian2").is_some());
    }
}
