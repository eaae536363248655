use std::fmt::Write as _;

use super::ReachTree;

/// One line per node: `<id> <depth> <parent|-> <region> <segment>`.
pub fn dump_tree(tree: &ReachTree) -> String {
    let mut out = String::new();
    for n in &tree.nodes {
        let parent = n.parent.map_or_else(|| "-".to_string(), |p| p.to_string());
        let _ = writeln!(out, "{} {} {} {} {}", n.id, n.depth, parent, n.region, n.segment);
    }
    out
}

pub fn tree_to_dot(tree: &ReachTree) -> String {
    let mut out = String::from("digraph reachtree {\n    rankdir=LR;\n    root [shape=point];\n");
    for n in &tree.nodes {
        let style = if n.via_vertex { ", style=dashed" } else { "" };
        let _ = writeln!(out, "    n{} [label=\"{} R{}\"{}];", n.id, n.segment, n.region, style);
        match n.parent {
            Some(p) => {
                let _ = writeln!(out, "    n{p} -> n{};", n.id);
            }
            None => {
                let _ = writeln!(out, "    root -> n{};", n.id);
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reachtree::{build_tree, Limits};
    use crate::world::{build_subdivision, two_cell};

    #[test]
    fn dump_lines() {
        let w = two_cell();
        let sub = build_subdivision(&w).unwrap();
        let t = build_tree(&w, &sub, &Limits::new(10, 100));
        let text = dump_tree(&t);
        assert_eq!(text.lines().count(), 7);
        assert!(text.lines().any(|l| l.ends_with("0 [(0,0),(0,2)]")));
        assert!(text.lines().next().unwrap().contains(" 1 - 1 "));
        let dot = tree_to_dot(&t);
        assert_eq!(dot.matches("->").count(), 7);
    }
}
