//! JSON and DOT serialization of split systems, Buneman complexes,
//! tight-span complexes, tight points, and verification reports. All
//! numbers are emitted as exact `p/q` strings; decimal approximations are
//! added alongside on request, never in place of the exact values.

use serde_json::{json, Map, Value};

use crate::buneman::BunemanComplex;
use crate::kappa::TightPoint;
use crate::metric::DecompositionResult;
use crate::oracle::OracleReport;
use crate::rational::{decimal_approx, format_rational};
use crate::splits::{GroundSet, TaxonSet, WeightedSplitSystem};
use crate::tightspan::PolytopalComplex;

fn side_labels(ground: &GroundSet, side: TaxonSet) -> Value {
    Value::Array(
        side.iter()
            .map(|i| Value::String(ground.label(i).to_string()))
            .collect(),
    )
}

fn mask_indices(mask: u64) -> Value {
    Value::Array(TaxonSet(mask).iter().map(|i| json!(i)).collect())
}

pub fn system_json(sys: &WeightedSplitSystem) -> Value {
    let splits: Vec<Value> = sys
        .splits()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            json!({
                "id": i,
                "weight": format_rational(sys.weight(i)),
                "side": side_labels(sys.ground(), s.side()),
            })
        })
        .collect();
    json!({
        "taxa": sys.ground().labels(),
        "splits": splits,
    })
}

/// A tight point as `{ "f": {label: "p/q"}, "tight": [[x, y], ...] }`.
pub fn tight_point_json(point: &TightPoint, ground: &GroundSet) -> Value {
    let mut f = Map::new();
    for (i, v) in point.coords().iter().enumerate() {
        f.insert(ground.label(i).to_string(), json!(format_rational(v)));
    }
    let tight: Vec<Value> = point
        .tight_pairs()
        .iter()
        .map(|&(x, y)| json!([ground.label(x), ground.label(y)]))
        .collect();
    json!({ "f": f, "tight": tight })
}

pub fn buneman_json(complex: &BunemanComplex) -> Value {
    let sys = complex.system();
    let ground = sys.ground();
    let vertices: Vec<Value> = complex
        .vertices()
        .iter()
        .enumerate()
        .map(|(id, &choice)| {
            let mut sides = Map::new();
            for (i, s) in sys.splits().iter().enumerate() {
                let chosen = if choice >> i & 1 == 1 {
                    s.side()
                } else {
                    s.other_side()
                };
                sides.insert(i.to_string(), side_labels(ground, chosen));
            }
            json!({ "id": id, "choice": sides })
        })
        .collect();
    let edges: Vec<Value> = complex
        .edges()
        .iter()
        .map(|e| json!({ "vertices": [e.endpoints.0, e.endpoints.1], "split": e.split }))
        .collect();
    let cells: Vec<Value> = complex
        .cells()
        .iter()
        .enumerate()
        .map(|(id, c)| {
            json!({
                "id": id,
                "dim": c.dim,
                "base": complex.vertex_id(c.base).expect("base is a vertex"),
                "free": mask_indices(c.free),
                "faces": c.facets,
                "maximal": c.maximal,
            })
        })
        .collect();
    let blocks: Vec<Value> = complex
        .blocks()
        .iter()
        .enumerate()
        .map(|(id, b)| {
            json!({
                "id": id,
                "component": b.component,
                "splits": mask_indices(b.splits),
                "class": complex.component_classes()[b.component].name(),
                "cells": b.cells,
                "vertices": b.vertices,
                "cut_vertices": b.cut_vertices,
            })
        })
        .collect();
    let mut taxon_vertices = Map::new();
    for x in 0..sys.n() {
        taxon_vertices.insert(ground.label(x).to_string(), json!(complex.taxon_vertex(x)));
    }
    let mut root = system_json(sys);
    let obj = root.as_object_mut().unwrap();
    obj.insert("vertices".into(), Value::Array(vertices));
    obj.insert("edges".into(), Value::Array(edges));
    obj.insert("cells".into(), Value::Array(cells));
    obj.insert("blocks".into(), Value::Array(blocks));
    obj.insert("cut_vertices".into(), json!(complex.cut_vertices()));
    obj.insert("taxon_vertices".into(), Value::Object(taxon_vertices));
    root
}

pub fn tightspan_json(complex: &PolytopalComplex, decimals: Option<usize>) -> Value {
    let ground = complex.ground();
    let vertices: Vec<Value> = complex
        .vertices()
        .iter()
        .enumerate()
        .map(|(id, v)| {
            let mut coords = Map::new();
            for (i, c) in v.coords().iter().enumerate() {
                coords.insert(ground.label(i).to_string(), json!(format_rational(c)));
            }
            let mut entry = Map::new();
            entry.insert("id".into(), json!(id));
            entry.insert("coords".into(), Value::Object(coords));
            if let Some(k) = decimals {
                let mut approx = Map::new();
                for (i, c) in v.coords().iter().enumerate() {
                    approx.insert(ground.label(i).to_string(), json!(decimal_approx(c, k)));
                }
                entry.insert("coords_decimal".into(), Value::Object(approx));
            }
            Value::Object(entry)
        })
        .collect();
    let cells: Vec<Value> = complex
        .cells()
        .iter()
        .enumerate()
        .map(|(id, c)| {
            json!({
                "id": id,
                "dim": c.dim,
                "vertices": c.vertices,
                "faces": c.facets,
                "block": c.block,
            })
        })
        .collect();
    let blocks: Vec<Value> = complex
        .blocks()
        .iter()
        .enumerate()
        .map(|(id, b)| {
            json!({
                "id": id,
                "component": b.component,
                "splits": mask_indices(b.splits),
                "class": b.class.name(),
                "cells": b.cells,
                "vertices": b.vertices,
                "cut_vertices": b.cut_vertices,
                "interior_points": b.interior_points.iter()
                    .map(|p| tight_point_json(p, ground))
                    .collect::<Vec<_>>(),
            })
        })
        .collect();
    let edges: Vec<Value> = complex
        .edges()
        .iter()
        .map(|&(a, b)| json!([a, b]))
        .collect();
    json!({
        "taxa": ground.labels(),
        "vertices": vertices,
        "edges": edges,
        "cells": cells,
        "blocks": blocks,
    })
}

pub fn decomposition_json(result: &DecompositionResult, decimals: Option<usize>) -> Value {
    let ground = result.system.ground();
    let n = ground.len();
    let mut residual_rows = Vec::new();
    for x in 0..n {
        let row: Vec<Value> = (0..n)
            .map(|y| {
                let v = &result.residual[x * n + y];
                match decimals {
                    Some(k) => json!([format_rational(v), decimal_approx(v, k)]),
                    None => json!(format_rational(v)),
                }
            })
            .collect();
        residual_rows.push(Value::Array(row));
    }
    let mut root = system_json(&result.system);
    let obj = root.as_object_mut().unwrap();
    obj.insert(
        "totally_split_decomposable".into(),
        json!(result.totally_split_decomposable),
    );
    obj.insert(
        "weakly_compatible".into(),
        json!(result.system_weakly_compatible),
    );
    obj.insert("residual".into(), Value::Array(residual_rows));
    root
}

/// Verification report as JSON.
pub fn report_json(report: &OracleReport) -> Value {
    let cell_checks: Vec<Value> = report
        .cell_checks
        .iter()
        .map(|c| {
            json!({
                "cell": c.cell,
                "dim": c.dim,
                "solution_dim": c.solution_dim,
                "affine_dim": c.affine_dim,
                "pass": c.pass,
            })
        })
        .collect();
    json!({
        "vertices_match": report.vertices_match,
        "edges_match": report.edges_match,
        "vertex_count": { "oracle": report.oracle_vertex_count, "structural": report.structural_vertex_count },
        "edge_count": { "oracle": report.oracle_edge_count, "structural": report.structural_edge_count },
        "block_count": { "oracle": report.oracle_block_count, "structural": report.structural_block_count },
        "cell_checks": cell_checks,
        "mismatches": report.mismatches,
        "passed": report.passed(),
    })
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// The Buneman graph in DOT, with split-id edge labels and taxon
/// annotations on the embedded vertices.
pub fn buneman_dot(complex: &BunemanComplex) -> String {
    let sys = complex.system();
    let mut out = String::from("graph buneman {\n  node [shape=circle];\n");
    for id in 0..complex.vertex_count() {
        let taxa: Vec<&str> = (0..sys.n())
            .filter(|&x| complex.taxon_vertex(x) == id)
            .map(|x| sys.ground().label(x))
            .collect();
        let label = if taxa.is_empty() {
            id.to_string()
        } else {
            format!("{id} ({})", taxa.join(","))
        };
        out.push_str(&format!("  v{id} [label=\"{}\"];\n", dot_escape(&label)));
    }
    for e in complex.edges() {
        out.push_str(&format!(
            "  v{} -- v{} [label=\"S{}\"];\n",
            e.endpoints.0, e.endpoints.1, e.split
        ));
    }
    out.push_str("}\n");
    out
}

/// The tight-span 1-skeleton in DOT; edges are labeled by block id.
pub fn tightspan_dot(complex: &PolytopalComplex) -> String {
    let mut out = String::from("graph tightspan {\n  node [shape=point];\n");
    for id in 0..complex.vertex_count() {
        out.push_str(&format!("  v{id} [label=\"{id}\"];\n"));
    }
    for &cid in complex.cells_of_dim(1) {
        let cell = &complex.cells()[cid];
        out.push_str(&format!(
            "  v{} -- v{} [label=\"B{}\"];\n",
            cell.vertices[0], cell.vertices[1], cell.block
        ));
    }
    out.push_str("}\n");
    out
}
