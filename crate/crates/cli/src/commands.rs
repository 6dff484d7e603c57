use serde_json::{json, Value};

use polyrigid::constructions::{
    build_flexible_open, build_hypercube, build_k2d, build_np_gadget, build_octahedron, l1_plane_to_linf,
    randomize_realisation, randomize_rigid_realisation, GadgetSpec,
};
use polyrigid::framework::is_strong_colouring_linf;
use polyrigid::global::{decide_generic_global_linf2, Criterion};
use polyrigid::graph::{is_2_connected, is_connected};
use polyrigid::io::{positions_map, write_framework, FrameworkFile};
use polyrigid::oracle::{numeric_witness_search, SearchParams};
use polyrigid::rational::format_rational;
use polyrigid::sparsity::{is_dd_redundant, is_mdd_connected, is_sparse, is_tight, pebble_rank};
use polyrigid::{
    decide_global_rigidity, DirectedColouring, Framework, GlobalOptions, Graph, NormKind, Outcome, PolytopeNorm,
    SparsityParams,
};

use crate::{input, Failure, Generate, NormName};

/// Enumerating `Φ_p` beyond this many colourings is skipped.
const ADVISORY_LIMIT: usize = 4096;

fn input_doc(fw: &Framework) -> Value {
    serde_json::to_value(FrameworkFile::from_framework(fw)).expect("file serializes")
}

fn face_doc(norm: &PolytopeNorm, face: Option<usize>) -> Value {
    match face {
        Some(f) => json!(norm.face(f).iter().map(format_rational).collect::<Vec<_>>()),
        None => Value::Null,
    }
}

fn edge_names(g: &Graph, e: usize) -> Value {
    let (a, b) = g.edges()[e];
    json!([g.name(a), g.name(b)])
}

fn colouring_doc(fw: &Framework, phi: &DirectedColouring) -> Value {
    let g = fw.graph();
    (0..g.edge_count()).map(|e| json!({"edge": edge_names(g, e), "face": face_doc(fw.norm(), phi.get(e))})).collect()
}

pub fn analyze(fw: &Framework) -> Result<Value, Failure> {
    let g = fw.graph();
    let candidates = fw.induced_colourings();
    let candidate_doc: Vec<Value> = candidates
        .candidates()
        .iter()
        .enumerate()
        .map(|(e, cs)| {
            json!({"edge": edge_names(g, e), "faces": cs.iter().map(|&f| face_doc(fw.norm(), f)).collect::<Vec<_>>()})
        })
        .collect();
    let mut doc = json!({
        "input": input_doc(fw),
        "edge_lengths": fw.edge_lengths().iter().map(format_rational).collect::<Vec<_>>(),
        "induced_colourings": candidate_doc,
        "full_rank": fw.full_rank(),
    });
    let Ok(phi) = fw.induced_colouring() else {
        doc["well_positioned"] = json!(false);
        let every = fw.rigid_for_every_induced_colouring(ADVISORY_LIMIT).ok();
        doc["advisory"] = json!({
            "rigid_for_every_induced_colouring": every,
            "colourings": candidates.count().to_string(),
            "warning": "full rank for every colouring in Φ_p implies rigidity; failure proves nothing",
        });
        return Ok(doc);
    };
    let m = fw.colouring_matrix(&phi)?;
    let rank = polyrigid::framework::rank_exact(&m);
    doc["well_positioned"] = json!(true);
    doc["induced_colouring"] = colouring_doc(fw, &phi);
    doc["rank"] = json!(rank);
    doc["rigid"] = json!(rank == fw.full_rank());
    doc["redundant"] = json!(fw.is_redundantly_rigid()?);
    doc["criteria"] = json!({
        "rigid": "rank M(G, φ_p) = d|V| - d",
        "redundant": "rank stays d|V| - d after deleting any one edge",
    });
    if fw.norm().is_linf() {
        let classes = fw.monochromatic_subgraphs(&phi)?;
        doc["monochromatic"] = classes
            .iter()
            .enumerate()
            .map(|(i, c)| {
                json!({"coordinate": i + 1, "edges": c.edge_count(), "connected": is_connected(c), "two_connected": is_2_connected(c)})
            })
            .collect();
        doc["rigid_by_colour"] = json!(classes.iter().all(is_connected));
    }
    Ok(doc)
}

fn outcome_name(o: Outcome) -> Value {
    serde_json::to_value(o).expect("outcome serializes")
}

/// Generic certificates, as `(document, verdict)` pairs.
fn generic_certificates(fw: &Framework) -> Result<Vec<(Value, Option<Outcome>)>, Failure> {
    let mut out = Vec::new();
    if !fw.is_well_positioned() {
        return Ok(out);
    }
    let plane = fw.dim() == 2 && matches!(fw.norm().kind(), NormKind::Linf | NormKind::L1);
    let image = match fw.norm().kind() {
        NormKind::Linf => Some(fw.clone()),
        NormKind::L1 if fw.dim() == 2 => Some(l1_plane_to_linf(fw)?),
        _ => None,
    };
    if let Some(image) = image {
        let image_phi = image.induced_colouring()?;
        let strong = is_strong_colouring_linf(image.graph(), &image_phi, image.norm())?;
        let verdict = strong.then_some(Outcome::GloballyRigid);
        out.push((
            json!({
                "name": "strong colouring",
                "criterion": "every monochromatic subgraph of φ_p is 2-connected",
                "holds": strong,
                "verdict": verdict.map(outcome_name),
                "generic": true,
            }),
            verdict,
        ));
    }
    if plane {
        let rigid = fw.is_infinitesimally_rigid()?;
        let connected = is_mdd_connected(fw.graph(), 2)?;
        let linf_image = if fw.norm().is_linf() { fw.clone() } else { l1_plane_to_linf(fw)? };
        debug_assert_eq!(decide_generic_global_linf2(fw.graph(), Some(&linf_image)).ok(), Some(rigid && connected));
        let verdict = match (rigid, connected) {
            (false, _) => Outcome::NotRigid,
            (true, true) => Outcome::GloballyRigid,
            (true, false) => Outcome::NotGloballyRigid,
        };
        out.push((
            json!({
                "name": "planar matroid",
                "criterion": "generic frameworks in the plane are globally rigid iff rigid and M(2,2)-connected",
                "rigid": rigid,
                "mdd_connected": connected,
                "verdict": outcome_name(verdict),
                "generic": true,
            }),
            Some(verdict),
        ));
    }
    Ok(out)
}

fn criterion_text(c: Criterion) -> &'static str {
    match c {
        Criterion::WellPositioned => "some edge vector is not a smooth point of the norm",
        Criterion::RankDeficient => "rank M(G, φ_p) < d|V| - d",
        Criterion::EquivalentRealisation => "a colouring not isometric to φ_p admits an equivalent realisation",
        Criterion::ExhaustiveSearch => "no colouring outside the isometry class of φ_p admits an equivalent realisation",
        Criterion::Budget => "the search budget ran out",
    }
}

pub fn global(fw: &Framework, budget: u64, assume_generic: bool, threads: usize) -> Result<(Value, bool), Failure> {
    let certificates = generic_certificates(fw)?;
    // The planar characterisation is an equivalence, so it wins over the
    // one-sided colouring certificate.
    let generic_verdict = certificates.iter().rev().find_map(|(doc, v)| v.map(|v| (doc["name"].clone(), v)));
    let mut doc = json!({
        "input": input_doc(fw),
        "parameters": {"budget": budget, "threads": threads, "assume_generic": assume_generic},
        "certificates": certificates.iter().map(|(d, _)| d.clone()).collect::<Vec<_>>(),
    });
    let mut exceeded = false;
    match generic_verdict {
        Some((source, outcome)) if assume_generic => {
            doc["exact"] = Value::Null;
            doc["verdict"] = json!({"outcome": outcome_name(outcome), "generic": true, "source": source});
        }
        _ => {
            let v = decide_global_rigidity(fw, GlobalOptions { budget, threads });
            exceeded = v.outcome == Outcome::BudgetExceeded;
            doc["exact"] = json!({
                "outcome": outcome_name(v.outcome),
                "criterion": criterion_text(v.certificate.criterion),
                "search": v.certificate.search,
                "witness": v.witness.as_ref().map(|q| positions_map(fw.graph(), q)),
                "generic_caveat": v.generic_caveat,
            });
            doc["verdict"] = json!({"outcome": outcome_name(v.outcome), "generic": false, "source": "exact search"});
        }
    }
    Ok((doc, exceeded))
}

pub fn sparsity(g: &Graph, d: usize, k: usize) -> Result<Value, Failure> {
    let params = SparsityParams::new(d, k)?;
    let mut doc = json!({
        "graph": {
            "vertices": g.names(),
            "edges": (0..g.edge_count()).map(|e| edge_names(g, e)).collect::<Vec<_>>(),
        },
        "d": d,
        "k": k,
        "matroidal": params.is_matroidal(),
        "sparse": is_sparse(g, params)?,
        "tight": is_tight(g, params)?,
        "two_connected": is_2_connected(g),
    });
    if params.is_matroidal() {
        let rank = pebble_rank(g, params)?;
        let redundant_edges: Vec<bool> =
            (0..g.edge_count()).map(|e| pebble_rank(&g.without_edge(e), params).map(|r| r == rank)).collect::<Result<_, _>>()?;
        doc["rank"] = json!(rank);
        doc["redundant"] = json!(redundant_edges.iter().all(|&r| r));
        doc["edge_redundant"] = json!(redundant_edges);
    } else {
        doc["rank"] = Value::Null;
    }
    if d >= 1 {
        doc["dd_redundant"] = json!(is_dd_redundant(g, d)?);
        doc["mdd_connected"] = json!(is_mdd_connected(g, d)?);
    }
    Ok(doc)
}

fn preset(norm: NormName, dim: usize) -> PolytopeNorm {
    match norm {
        NormName::Linf => PolytopeNorm::linf(dim),
        NormName::L1 => PolytopeNorm::l1(dim),
    }
}

pub fn generate(kind: Generate) -> Result<String, Failure> {
    let fw = match kind {
        Generate::K2d { d, n, epsilon, rigid_part } => {
            let k = build_k2d(d, &epsilon, n.unwrap_or(2 * d))?;
            if rigid_part {
                k.rigid_part
            } else {
                k.complete
            }
        }
        Generate::Hypercube { d } => build_hypercube(d)?,
        Generate::Octahedron => build_octahedron(),
        Generate::NpGadget { seed, d, epsilon } => {
            let seed = input::framework(&seed)?;
            build_np_gadget(&GadgetSpec { seed, d, epsilon })?.framework
        }
        Generate::Flexible { graph, norm, dim } => build_flexible_open(&input::graph(&graph)?, &preset(norm, dim))?,
        Generate::Random { graph, norm, dim, seed, denominator_bound, rigid } => {
            let g = input::graph(&graph)?;
            let norm = preset(norm, dim);
            if rigid {
                randomize_rigid_realisation(&g, &norm, seed, denominator_bound)?
            } else {
                randomize_realisation(&g, &norm, seed, denominator_bound)?
            }
        }
    };
    Ok(write_framework(&fw))
}

pub fn witness(fw: &Framework, restarts: u64, seed: u64, threads: usize) -> Value {
    let params = SearchParams { restarts, seed, threads, ..SearchParams::default() };
    let r = numeric_witness_search(fw, &params);
    json!({
        "input": input_doc(fw),
        "parameters": {"restarts": restarts, "seed": seed, "threads": threads, "steps": params.steps,
                       "tolerance": format_rational(&params.tolerance), "max_denominator": params.max_denominator},
        "found": r.witness.is_some(),
        "witness": r.witness.as_ref().map(|q| positions_map(fw.graph(), q)),
        "restarts_run": r.restarts_run,
        "converged": r.converged,
        "congruent": r.congruent,
        "rounding_failures": r.rounding_failures,
        "message": if r.witness.is_some() { "verified equivalent non-congruent realisation" } else { "none found in budget" },
    })
}
