mod support;

use std::path::PathBuf;

use ffc_core::flowgraph::{build_graph, import_graph, to_interchange, validate, FlowGraph};
use ffc_core::minij::{parse_source, tokenize};
use support::oracle::{dfg_by_walks, dfg_of, is_acyclic};

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/golden")
}

fn golden_graphs() -> Vec<(String, String, FlowGraph)> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(golden_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "mj"))
        .collect();
    files.sort();
    assert_eq!(files.len(), 28);
    files
        .into_iter()
        .map(|path| {
            let src = std::fs::read_to_string(&path).unwrap();
            let program = parse_source(&src).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            let method = program.methods[0].name.clone();
            let g = build_graph(&program, &method)
                .unwrap_or_else(|e| panic!("{}: {e}", path.display()))
                .graph;
            (
                path.file_name().unwrap().to_string_lossy().into_owned(),
                src,
                g,
            )
        })
        .collect()
}

#[test]
fn golden_graphs_are_valid() {
    for (name, _, g) in golden_graphs() {
        validate(&g).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn golden_dfg_equals_walk_oracle() {
    for (name, _, g) in golden_graphs() {
        assert_eq!(dfg_of(&g), dfg_by_walks(&g), "{name}");
    }
}

#[test]
fn golden_interchange_round_trip() {
    for (name, _, g) in golden_graphs() {
        assert_eq!(import_graph(&to_interchange(&g)).unwrap(), g, "{name}");
    }
}

#[test]
fn jump_statements_lower_to_jump_edges() {
    // Every jump statement in the corpus is reached along a single pending
    // edge, so each one contributes exactly one jump edge.
    for (name, src, g) in golden_graphs() {
        let jump_tokens = tokenize(&src)
            .unwrap()
            .iter()
            .filter(|t| matches!(t.text.as_str(), "break" | "continue" | "return" | "throw"))
            .count();
        let jump_edges = g.cfg.iter().filter(|e| e.kind.jump.is_some()).count();
        assert_eq!(jump_edges, jump_tokens, "{name}");
    }
}

#[test]
fn acyclic_graphs_are_recognised() {
    let graphs = golden_graphs();
    let acyclic = graphs.iter().filter(|(_, _, g)| is_acyclic(g)).count();
    assert!(acyclic > 0 && acyclic < graphs.len());
}

fn to_petgraph(g: &FlowGraph) -> petgraph::Graph<String, String> {
    let mut pg = petgraph::Graph::new();
    let mut idx = std::collections::BTreeMap::new();
    for n in g.nodes.values() {
        let weight = format!("{}|{}|{:?}|{:?}", n.kind.as_str(), n.label, n.defs, n.uses);
        idx.insert(n.id, pg.add_node(weight));
    }
    for e in &g.cfg {
        pg.add_edge(idx[&e.src], idx[&e.dst], format!("cfg {}", e.kind));
    }
    for e in &g.dfg {
        pg.add_edge(
            idx[&e.def],
            idx[&e.use_node],
            format!("dfg {}", e.var.as_str()),
        );
    }
    pg
}

/// Rewrites every node id of an interchange document as `n -> k - n`.
fn renumber(text: &str) -> String {
    let mut v: serde_json::Value = serde_json::from_str(text).unwrap();
    let k = 1000;
    let flip = |x: &mut serde_json::Value| *x = (k - x.as_u64().unwrap()).into();
    for n in v["nodes"].as_array_mut().unwrap() {
        flip(&mut n["id"]);
    }
    for e in v["cfg"].as_array_mut().unwrap() {
        flip(&mut e["src"]);
        flip(&mut e["dst"]);
    }
    for e in v["dfg"].as_array_mut().unwrap() {
        flip(&mut e["def"]);
        flip(&mut e["use"]);
    }
    flip(&mut v["entry"]);
    flip(&mut v["exit"]);
    v.to_string()
}

#[test]
fn renumbered_round_trip_is_isomorphic() {
    for (name, _, g) in golden_graphs() {
        let back =
            import_graph(&renumber(&to_interchange(&g))).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_ne!(back.entry, g.entry, "{name}");
        let (a, b) = (to_petgraph(&g), to_petgraph(&back));
        assert!(
            petgraph::algo::is_isomorphic_matching(&a, &b, |x, y| x == y, |x, y| x == y),
            "{name}"
        );
    }
}
