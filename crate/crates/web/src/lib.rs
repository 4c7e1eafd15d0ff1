//! Browser bindings. Every export takes JSON text and plain numbers and
//! returns a JSON envelope `{"ok": true, "result": ..}` or
//! `{"ok": false, "error": {"code", "message", "location"}}`.

use serde::Serialize;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use ramcycles::cycle::{build_cycle_lattice, local_context, CycleLattice};
use ramcycles::json as rjson;
use ramcycles::lattice::HermGram;
use ramcycles::oracle::{enumerate_vertices, EnumerationBounds, GeneratorOrder};
use ramcycles::padic::parse_rational;
use ramcycles::{jordan_split, CycleStatus, Error, HermLattice, RamifiedContext};

/// Candidate budget for the census, kept small so the page stays responsive.
pub const BROWSER_MAX_CANDIDATES: u64 = 200_000;

fn envelope(result: Result<Value, Error>) -> String {
    let v = match result {
        Ok(result) => json!({"ok": true, "result": result}),
        Err(e) => json!({
            "ok": false,
            "error": {
                "code": e.code(),
                "message": e.to_string(),
                "location": rjson::error_location(&e),
            },
        }),
    };
    v.to_string()
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn parse(matrix: &str, p: u32, epsilon: &str) -> Result<HermGram, Error> {
    let eps = parse_rational(epsilon).map_err(|e| Error::Schema {
        location: "epsilon".into(),
        message: e.to_string(),
    })?;
    let ctx: RamifiedContext = local_context(u64::from(p), eps, None)?;
    rjson::local_gram(&rjson::parse_document(matrix)?, &ctx)
}

/// Gram matrix of `L`: the input with `raw`, else `u₀·T`.
fn lattice_gram(matrix: &str, p: u32, epsilon: &str, raw: bool) -> Result<Option<HermGram>, Error> {
    let g = parse(matrix, p, epsilon)?;
    if raw {
        return Ok(Some(g));
    }
    Ok(match build_cycle_lattice(&g)? {
        CycleLattice::Lattice(l) => Some(l),
        CycleLattice::EmptyNonintegral { .. } => None,
    })
}

/// Jordan blocks of the Gram matrix.
#[wasm_bindgen]
pub fn jordan_report(matrix: &str, p: u32, epsilon: &str) -> String {
    envelope(parse(matrix, p, epsilon).and_then(|g| Ok(to_value(&jordan_split(&g)?))))
}

/// Cycle status and invariants, plus the Gram matrix of `L`.
#[wasm_bindgen]
pub fn cycle_invariants(matrix: &str, p: u32, epsilon: &str, raw: bool) -> String {
    envelope(lattice_gram(matrix, p, epsilon, raw).and_then(|g| {
        let Some(g) = g else {
            return Ok(to_value(&CycleStatus::EmptyNonintegral));
        };
        let mut v = to_value(&CycleStatus::Nonempty(ramcycles::cycle_invariants(&g)?));
        v["gram"] = to_value(g.matrix());
        Ok(v)
    }))
}

/// Vertex lattices of `L` by type, with the Hasse diagram as Graphviz text.
#[wasm_bindgen]
pub fn vertex_census(matrix: &str, p: u32, epsilon: &str, raw: bool) -> String {
    envelope(lattice_gram(matrix, p, epsilon, raw).and_then(|g| {
        let g = g.ok_or(Error::NotIntegral)?;
        let bounds = EnumerationBounds {
            max_candidates: BROWSER_MAX_CANDIDATES,
            ..EnumerationBounds::default()
        };
        let set = enumerate_vertices(&HermLattice::standard(g), &bounds, GeneratorOrder::Forward)?;
        let hasse: Vec<[usize; 2]> = set.hasse_edges().into_iter().map(|(i, j)| [i, j]).collect();
        Ok(json!({
            "vertices": to_value(&set.vertices),
            "type_counts": to_value(&set.type_counts),
            "max_type": set.max_type,
            "max_count": set.max_count,
            "hasse_edges": hasse,
            "dot": set.to_dot(),
        }))
    }))
}
