use std::time::Instant;

use serde::Serialize;

use super::AnalysisError;
use crate::network::{assemble, CircuitSpec};
use crate::search::{search_efficient, SearchConfig};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimingSummary {
    pub repetitions: usize,
    pub mean_s: f64,
    pub min_s: f64,
    pub max_s: f64,
    pub alpha_hat: f64,
}

/// Wall-clock statistics of repeated cold `search_efficient` runs. Only the
/// search call is timed; assembly happens once up front.
pub fn timing_harness(
    spec: &CircuitSpec,
    repetitions: usize,
    cfg: &SearchConfig,
) -> Result<TimingSummary, AnalysisError> {
    if repetitions == 0 {
        return Err(AnalysisError::ZeroRepetitions);
    }
    let sys = assemble(spec)?;
    let mut times = Vec::with_capacity(repetitions);
    let mut alpha_hat = None;
    for _ in 0..repetitions {
        let t0 = Instant::now();
        let res = search_efficient(&sys, cfg)?;
        times.push(t0.elapsed().as_secs_f64());
        match alpha_hat {
            None => alpha_hat = Some(res.alpha_hat),
            Some(first) if first.to_bits() != res.alpha_hat.to_bits() => {
                return Err(AnalysisError::NonDeterministic {
                    first,
                    later: res.alpha_hat,
                })
            }
            Some(_) => {}
        }
    }
    Ok(TimingSummary {
        repetitions,
        mean_s: times.iter().sum::<f64>() / repetitions as f64,
        min_s: times.iter().copied().fold(f64::INFINITY, f64::min),
        max_s: times.iter().copied().fold(0.0, f64::max),
        alpha_hat: alpha_hat.expect("at least one repetition"),
    })
}
