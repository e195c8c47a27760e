//! DOT rendering of the distance-one graph on a class set. Nodes appear in
//! canonical order; labels are exponent vectors when an apartment is given
//! (falling back to diagonal exponents off the apartment), and highlighted
//! nodes are drawn filled.

use crate::building::{Apartment, ClassSet};

pub fn render_dot(
    set: &ClassSet,
    apartment: Option<&Apartment>,
    highlight: Option<&ClassSet>,
) -> String {
    let mut out = String::from("graph classes {\n  node [shape=circle];\n");
    for (i, c) in set.iter().enumerate() {
        let label = match apartment.and_then(|a| a.exponent_vector(c).ok()) {
            Some(u) => format!("({})", join_i64(&u)),
            None => format!("diag({})", join_i64(&c.rep().diag_exponents())),
        };
        let mut attrs = format!("label=\"{label}\"");
        if highlight.is_some_and(|h| h.contains(c)) {
            attrs.push_str(", style=filled, fillcolor=lightblue");
        }
        out.push_str(&format!("  n{i} [{attrs}];\n"));
    }
    for i in 0..set.len() {
        for j in i + 1..set.len() {
            if set.get(i).distance(set.get(j)) == 1 {
                out.push_str(&format!("  n{i} -- n{j};\n"));
            }
        }
    }
    out.push_str("}\n");
    out
}

fn join_i64(v: &[i64]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}
