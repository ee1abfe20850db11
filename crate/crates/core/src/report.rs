//! Serializable views of results for the CLI: JSON objects with a stable
//! field order and the CSV row shape used by the Monte Carlo harness.
//! Cyclic and table elements render as their integer index, product
//! elements as their tuple literal.

use serde::Serialize;
use serde_json::Value;

use crate::bounds::BoundReport;
use crate::construct::SeqRoute;
use crate::group::{Element, Group};
use crate::montecarlo::MonteCarloReport;
use crate::multiset::{Multiset, Sequencing};
use crate::seq::{verify_sums_t_weak, SeqVerdict};
use crate::walk::{verify_realization, RealVerdict, Realized, Walk};

pub fn element_value(g: &Group, e: Element) -> Value {
    if g.is_cyclic() || g.is_table() {
        Value::from(e.index())
    } else {
        Value::from(g.element_literal(e))
    }
}

pub fn elements_value(g: &Group, es: &[Element]) -> Value {
    Value::from(es.iter().map(|&e| element_value(g, e)).collect::<Vec<_>>())
}

pub fn to_json(value: &impl Serialize) -> String {
    serde_json::to_string(value).expect("reports serialize infallibly")
}

#[derive(Debug, Serialize)]
pub struct SequenceReport {
    pub group: String,
    pub t: u32,
    pub ordering: Value,
    pub partial_sums: Value,
    pub verified: bool,
    pub stage: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl SequenceReport {
    pub fn new(
        g: &Group,
        t: u32,
        seq: &Sequencing,
        route: SeqRoute,
        seed: Option<u64>,
    ) -> SequenceReport {
        let sums = seq.partial_sums(g);
        SequenceReport {
            group: g.spec().to_string(),
            t,
            ordering: elements_value(g, seq.order()),
            partial_sums: elements_value(g, &sums),
            verified: verify_sums_t_weak(&sums, t).is_ok(),
            stage: route.label(),
            seed,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RealizeReport {
    pub group: String,
    pub t: u32,
    pub walk: Value,
    pub delta: Value,
    pub verified: bool,
    pub route: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl RealizeReport {
    pub fn new(
        g: &Group,
        t: u32,
        m: &Multiset,
        realized: &Realized,
        seed: Option<u64>,
    ) -> RealizeReport {
        RealizeReport {
            group: g.spec().to_string(),
            t,
            walk: elements_value(g, realized.walk.vertices()),
            delta: elements_value(g, &realized.walk.delta(g)),
            verified: verify_realization(g, &realized.walk, m, t).is_ok(),
            route: realized.route.label(),
            seed,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct VerifySeqReport {
    pub group: String,
    pub t: u32,
    pub partial_sums: Value,
    pub ok: bool,
    pub violation: Option<(usize, usize)>,
}

impl VerifySeqReport {
    pub fn new(g: &Group, t: u32, sums: &[Element], verdict: SeqVerdict) -> VerifySeqReport {
        VerifySeqReport {
            group: g.spec().to_string(),
            t,
            partial_sums: elements_value(g, sums),
            ok: verdict.is_ok(),
            violation: match verdict {
                SeqVerdict::Ok => None,
                SeqVerdict::Violation { i, j } => Some((i, j)),
            },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct VerifyRealReport {
    pub group: String,
    pub t: u32,
    pub walk: Value,
    pub ok: bool,
    pub failure: Option<&'static str>,
    pub collision: Option<(usize, usize)>,
}

impl VerifyRealReport {
    pub fn new(g: &Group, t: u32, walk: &Walk, verdict: RealVerdict) -> VerifyRealReport {
        let (failure, collision) = match verdict {
            RealVerdict::Ok => (None, None),
            RealVerdict::LengthMismatch { .. } => (Some("length"), None),
            RealVerdict::DeltaMismatch => (Some("delta"), None),
            RealVerdict::Collision { i, j } => (Some("window"), Some((i, j))),
        };
        VerifyRealReport {
            group: g.spec().to_string(),
            t,
            walk: elements_value(g, walk.vertices()),
            ok: verdict.is_ok(),
            failure,
            collision,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BoundJson {
    pub t: u32,
    pub ell: u64,
    pub bound_rational: String,
    pub bound_float: f64,
}

impl From<&BoundReport> for BoundJson {
    fn from(r: &BoundReport) -> BoundJson {
        BoundJson {
            t: r.t,
            ell: r.ell,
            bound_rational: r.bound_rational(),
            bound_float: r.bound_f64(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct MinEllJson {
    pub t: u32,
    pub min_ell: u64,
}

#[derive(Debug, Serialize)]
pub struct McJson {
    pub group: String,
    pub t: u32,
    pub ell: u64,
    pub set_size: usize,
    pub trials: u64,
    pub seed: u64,
    pub bound_rational: String,
    pub bound_float: f64,
    #[serde(rename = "mean_X")]
    pub mean_x: f64,
    pub std_err: f64,
    pub within_three_std_err: bool,
}

impl McJson {
    pub fn new(g: &Group, r: &MonteCarloReport, set_size: usize, seed: u64) -> McJson {
        McJson {
            group: g.spec().to_string(),
            t: r.t,
            ell: r.ell,
            set_size,
            trials: r.trials,
            seed,
            bound_rational: r.bound.bound_rational(),
            bound_float: r.bound.bound_f64(),
            mean_x: r.mean_x(),
            std_err: r.std_err(),
            within_three_std_err: r.within_std_err(3.0),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SearchJson {
    pub group: String,
    pub t: u32,
    pub target: &'static str,
    pub outcome: &'static str,
    pub witness: Option<Value>,
}

pub const MC_CSV_HEADER: &str = "t, ell, bound_rational, bound_float, trials, mean_X, std_err";

pub fn mc_csv_row(r: &MonteCarloReport) -> String {
    format!(
        "{}, {}, {}, {:.6}, {}, {:.6}, {:.6}",
        r.t,
        r.ell,
        r.bound.bound_rational(),
        r.bound.bound_f64(),
        r.trials,
        r.mean_x(),
        r.std_err()
    )
}

pub const BOUND_CSV_HEADER: &str = "t, ell, bound_rational, bound_float";

pub fn bound_csv_row(r: &BoundReport) -> String {
    format!("{}, {}, {}, {:.6}", r.t, r.ell, r.bound_rational(), r.bound_f64())
}
