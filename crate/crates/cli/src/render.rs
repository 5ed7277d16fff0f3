//! Output renderings for sampled terms: de Bruijn s-expressions, named
//! lambda syntax, JSON trees, and DOT graphs with dashed pointer edges.

use lambdacount::oracle::{EnrichedTree, LambdaTermDB, Shape};
use serde_json::{json, Value};

/// Named lambda syntax with fresh names `x1, x2, ...` in abstraction order:
/// `(\x1. x1)`, `((\x1. x1) (\x2. x2))`.
pub fn named(term: &LambdaTermDB) -> String {
    fn walk(t: &LambdaTermDB, stack: &mut Vec<u32>, next: &mut u32, out: &mut String) {
        match t {
            LambdaTermDB::Var(k) => {
                let name = stack[stack.len() - *k as usize];
                out.push_str(&format!("x{name}"));
            }
            LambdaTermDB::Abs(body) => {
                *next += 1;
                let name = *next;
                stack.push(name);
                out.push_str(&format!("(\\x{name}. "));
                walk(body, stack, next, out);
                out.push(')');
                stack.pop();
            }
            LambdaTermDB::App(l, r) => {
                out.push('(');
                walk(l, stack, next, out);
                out.push(' ');
                walk(r, stack, next, out);
                out.push(')');
            }
        }
    }
    let mut out = String::new();
    walk(term, &mut Vec::new(), &mut 0, &mut out);
    out
}

/// De Bruijn s-expression, e.g. `(\ (1 1))`.
pub fn debruijn(term: &LambdaTermDB) -> String {
    term.to_string()
}

/// JSON tree: `{"var": k}`, `{"abs": ...}`, `{"app": [l, r]}`.
pub fn json_term(term: &LambdaTermDB) -> Value {
    match term {
        LambdaTermDB::Var(k) => json!({ "var": k }),
        LambdaTermDB::Abs(b) => json!({ "abs": json_term(b) }),
        LambdaTermDB::App(l, r) => json!({ "app": [json_term(l), json_term(r)] }),
    }
}

/// DOT document for one enriched tree: solid edges for the tree, dashed
/// edges for the binder pointers (abstraction -> variable).
pub fn dot(t: &EnrichedTree, graph_name: &str) -> String {
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    let mut pointers = Vec::new();
    // preorder ids; remember each unary's node id and each leaf's node id
    let mut unary_nodes = Vec::new();
    fn walk(
        s: &Shape,
        parent: Option<usize>,
        next: &mut usize,
        nodes: &mut Vec<String>,
        edges: &mut Vec<(usize, usize)>,
        unary_nodes: &mut Vec<usize>,
        leaf_nodes: &mut Vec<usize>,
    ) {
        let id = *next;
        *next += 1;
        if let Some(p) = parent {
            edges.push((p, id));
        }
        match s {
            Shape::Leaf => {
                nodes.push(format!(
                    "  n{id} [shape=circle, label=\"\", width=0.12, style=filled];"
                ));
                leaf_nodes.push(id);
            }
            Shape::Unary(c) => {
                nodes.push(format!(
                    "  n{id} [shape=circle, label=\"\\\\\", width=0.2];"
                ));
                unary_nodes.push(id);
                walk(c, Some(id), next, nodes, edges, unary_nodes, leaf_nodes);
            }
            Shape::Binary(l, r) => {
                nodes.push(format!("  n{id} [shape=circle, label=\"@\", width=0.2];"));
                walk(l, Some(id), next, nodes, edges, unary_nodes, leaf_nodes);
                walk(r, Some(id), next, nodes, edges, unary_nodes, leaf_nodes);
            }
        }
    }
    let mut leaf_nodes = Vec::new();
    let mut next = 0usize;
    walk(
        &t.shape,
        None,
        &mut next,
        &mut nodes,
        &mut edges,
        &mut unary_nodes,
        &mut leaf_nodes,
    );
    for (leaf_idx, binder) in t.binders.iter().enumerate() {
        pointers.push((unary_nodes[*binder as usize], leaf_nodes[leaf_idx]));
    }
    let mut out = String::new();
    out.push_str(&format!("digraph \"{graph_name}\" {{\n"));
    for n in nodes {
        out.push_str(&n);
        out.push('\n');
    }
    for (a, b) in edges {
        out.push_str(&format!("  n{a} -> n{b} [arrowhead=none];\n"));
    }
    for (a, b) in pointers {
        out.push_str(&format!("  n{a} -> n{b} [style=dashed];\n"));
    }
    out.push_str("}\n");
    out
}
