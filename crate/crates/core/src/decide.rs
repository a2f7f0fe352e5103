//! The decision loop: chase levels interleaved with refuter stages.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::atoms::{NormalProblem, Problem};
use crate::chase::{ChaseBounds, ChaseError, ChaseGraph, Witness};
use crate::extract::extract_derivation;
use crate::proof::{check_derivation, Derivation};
use crate::refute::{is_counterexample, search_stage, SearchBudget};
use crate::team::Team;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DecideConfig {
    pub chase: ChaseBounds,
    pub search: SearchBudget,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DisproofSource {
    /// Read off a saturated chase graph.
    Saturation,
    /// Found by bounded enumeration.
    Search,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Proved {
        derivation: Derivation,
        depth: u32,
    },
    Disproved {
        team: Team,
        source: DisproofSource,
    },
    Unknown {
        depth: u32,
        vertices: usize,
        search_rows: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecideError {
    #[error("internal invariant failure: {0}")]
    InternalInvariantFailure(String),
}

fn internal(msg: impl Into<String>) -> DecideError {
    DecideError::InternalInvariantFailure(msg.into())
}

/// One chase per goal conjunct.
struct Lane {
    graph: ChaseGraph,
    witness: Option<(Witness, u32)>,
    stalled: bool,
}

/// Decides `p` within the configured bounds.
///
/// Round `k` first advances every open chase to level `k` and inspects it,
/// then searches teams with `k + 1` rows. Proofs are checked and
/// counterexamples re-verified before they are returned.
pub fn decide(p: &Problem, config: &DecideConfig) -> Result<Verdict, DecideError> {
    let normal = p.normalize();
    let mut lanes = open_lanes(&normal, config)?;
    let mut searched = 0usize;
    for round in 0.. {
        if round > 0 {
            for lane in lanes.iter_mut().filter(|l| l.witness.is_none() && !l.stalled) {
                if lane.graph.depth() >= config.chase.max_depth {
                    lane.stalled = true;
                    continue;
                }
                match lane.graph.expand_level() {
                    Ok(_) => {}
                    Err(ChaseError::VertexBudgetExceeded { .. }) => lane.stalled = true,
                    Err(e) => return Err(internal(format!("chase failed: {e}"))),
                }
            }
        }
        for lane in lanes.iter_mut().filter(|l| l.witness.is_none()) {
            if let Some(w) = lane.graph.find_witness() {
                lane.witness = Some((w, lane.graph.depth()));
            }
        }
        if lanes.iter().all(|l| l.witness.is_some()) {
            return prove(&normal, &lanes);
        }
        for lane in lanes.iter().filter(|l| l.witness.is_none()) {
            if lane.graph.is_saturated() {
                let team = lane
                    .graph
                    .team_from_saturated_graph()
                    .map_err(|e| internal(format!("{e}")))?;
                verify(p, &team)?;
                return Ok(Verdict::Disproved {
                    team,
                    source: DisproofSource::Saturation,
                });
            }
        }
        let rows = round + 1;
        if rows <= config.search.max_rows {
            searched = rows;
            if let Some(team) = search_stage(p, rows, config.search.values_for(rows)) {
                verify(p, &team)?;
                return Ok(Verdict::Disproved {
                    team,
                    source: DisproofSource::Search,
                });
            }
        }
        let chase_open = lanes.iter().any(|l| {
            l.witness.is_none() && !l.stalled && l.graph.depth() < config.chase.max_depth
        });
        if !chase_open && rows >= config.search.max_rows {
            break;
        }
    }
    Ok(Verdict::Unknown {
        depth: lanes.iter().map(|l| l.graph.depth()).max().unwrap_or(0),
        vertices: lanes.iter().map(|l| l.graph.vertices().len()).sum(),
        search_rows: searched,
    })
}

fn open_lanes(normal: &NormalProblem, config: &DecideConfig) -> Result<Vec<Lane>, DecideError> {
    (0..normal.goals.len())
        .map(|i| {
            let mut graph = ChaseGraph::for_query(normal.query(i))
                .map_err(|e| internal(format!("normalized query rejected: {e}")))?;
            graph.set_vertex_cap(config.chase.max_vertices.max(graph.vertices().len()));
            Ok(Lane {
                graph,
                witness: None,
                stalled: false,
            })
        })
        .collect()
}

fn prove(normal: &NormalProblem, lanes: &[Lane]) -> Result<Verdict, DecideError> {
    let pairs: Vec<(&ChaseGraph, Witness)> = lanes
        .iter()
        .map(|l| (&l.graph, l.witness.expect("all lanes witnessed").0))
        .collect();
    let derivation = extract_derivation(normal, &pairs).map_err(|e| internal(format!("{e}")))?;
    check_derivation(&derivation)
        .map_err(|e| internal(format!("extracted proof rejected: {e}")))?;
    let depth = lanes
        .iter()
        .map(|l| l.witness.expect("all lanes witnessed").1)
        .max()
        .unwrap_or(0);
    Ok(Verdict::Proved { derivation, depth })
}

fn verify(p: &Problem, team: &Team) -> Result<(), DecideError> {
    match is_counterexample(p, team) {
        Ok(true) => Ok(()),
        Ok(false) => Err(internal("counterexample failed re-verification")),
        Err(e) => Err(internal(format!("counterexample is malformed: {e}"))),
    }
}
