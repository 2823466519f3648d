//! Canonical text for operator specs; `parse(pretty_print(s)) == s`.

use std::fmt::Write;

use super::{Constraint, OperatorSpec};
use crate::diffpoly::render::render_rational;

pub fn pretty_print(spec: &OperatorSpec) -> String {
    let mut out = String::new();
    writeln!(out, "operator {:?} {{", spec.name).unwrap();
    for (k, v) in &spec.expectations {
        writeln!(out, "    # expect: {k}={v}").unwrap();
    }
    writeln!(out, "    dims {};", spec.dim).unwrap();
    if !spec.functions.is_empty() {
        let decls: Vec<String> = spec
            .functions
            .iter()
            .map(|f| match f.constraint {
                Constraint::None => format!("{}: R^{}", f.name, f.arity),
                c => format!("{}: R^{} constraint {}", f.name, f.arity, c),
            })
            .collect();
        writeln!(out, "    functions {};", decls.join(", ")).unwrap();
    }
    if let Some(ps) = &spec.exponents {
        let ps: Vec<String> = ps.iter().map(render_rational).collect();
        writeln!(out, "    exponents [{}];", ps.join(", ")).unwrap();
    }
    writeln!(out, "    expr = {};", spec.body).unwrap();
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    #[test]
    fn round_trips() {
        let texts = [
            r#"operator "jac2" { dims 2; functions u: R^2; expr = dx(u[1])*dy(u[2]) - dy(u[1])*dx(u[2]); }"#,
            r#"operator "half" { dims 2; functions u: R^1, v: R^1; exponents [2, 2]; expr = 1/2*dxx(u)*v; }"#,
            r#"operator "empty" { dims 3; functions E: R^3 constraint div0, B: R^3 constraint curl0; expr = ; }"#,
            r#"operator "hi" { dims 4; functions w: R^1; expr = d[1,0,0,3](w)^2 - 2; }"#,
        ];
        for t in texts {
            let s = parse(t).unwrap();
            let printed = pretty_print(&s);
            assert_eq!(parse(&printed).unwrap(), s, "{printed}");
            assert_eq!(pretty_print(&parse(&printed).unwrap()), printed);
        }
        let half = pretty_print(&parse(texts[1]).unwrap());
        assert!(half.contains("1/2*"), "{half}");
        let empty = pretty_print(&parse(texts[2]).unwrap());
        assert!(empty.contains("expr = 0;"), "{empty}");
    }
}
