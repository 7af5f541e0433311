//! Serializable reports. Numbers travel as exact strings with a lossy float
//! beside them for reading.

use serde::{Deserialize, Serialize};

use lorenz_renorm::conjugacy::BetaTransformParams;
use lorenz_renorm::map::LorenzMap;
use lorenz_renorm::renorm::{CascadeReport, RenormStep};
use lorenz_renorm::scalar::Scalar;

/// A number as its lossless text form plus an approximate float.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Num {
    pub value: String,
    pub lossy_f64: f64,
}

impl Num {
    pub fn of<S: Scalar>(x: &S) -> Num {
        Num {
            value: x.to_exact_string(),
            lossy_f64: x.to_f64(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapEcho {
    pub a: Num,
    pub b: Num,
    pub c: Num,
}

impl MapEcho {
    pub fn of<S: Scalar>(f: &LorenzMap<S>) -> MapEcho {
        MapEcho {
            a: Num::of(f.a()),
            b: Num::of(f.b()),
            c: Num::of(f.c()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepReport {
    pub kind: String,
    /// Renormalization interval in the coordinates of the map it came from.
    pub interval: [Num; 2],
    pub ell: usize,
    pub r: usize,
    /// The renormalized map on `[0, 1]`.
    pub after: MapEcho,
}

impl StepReport {
    pub fn of<S: Scalar>(s: &RenormStep<S>) -> StepReport {
        StepReport {
            kind: s.kind.as_str().to_string(),
            interval: [Num::of(&s.interval.0), Num::of(&s.interval.1)],
            ell: s.ell,
            r: s.r,
            after: MapEcho::of(&s.after),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub cascade_depth: usize,
    pub kneading_match_length: usize,
    pub beta_source: String,
    pub beta_error_estimate: f64,
    pub bisections: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjugacyReport {
    pub beta: Num,
    pub alpha: Num,
    pub certificate: CertificateReport,
}

impl ConjugacyReport {
    pub fn of<S: Scalar>(p: &BetaTransformParams<S>) -> ConjugacyReport {
        let c = &p.certificate;
        ConjugacyReport {
            beta: Num::of(&p.beta),
            alpha: Num::of(&p.alpha),
            certificate: CertificateReport {
                cascade_depth: c.cascade_depth,
                kneading_match_length: c.kneading_match_length,
                beta_source: c.beta_source.as_str().to_string(),
                beta_error_estimate: c.beta_error_estimate,
                bisections: c.bisections,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TerminalReport {
    pub map: MapEcho,
    pub class: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub input: MapEcho,
    pub mode: String,
    pub membership: String,
    pub kappa: usize,
    pub trivial_chain: Vec<StepReport>,
    /// Every step of the cascade, trivial and periodic, in order.
    pub cascade: Vec<StepReport>,
    pub depth: usize,
    /// Verdict on each reduced map along the cascade.
    pub dichotomy: Vec<String>,
    pub terminal: TerminalReport,
    pub conjugacy: ConjugacyReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
    pub warnings: Vec<String>,
}

impl AnalysisReport {
    pub fn assemble<S: Scalar>(
        f: &LorenzMap<S>,
        kappa: usize,
        chain: &[RenormStep<S>],
        cascade: &CascadeReport<S>,
        conjugacy: &BetaTransformParams<S>,
    ) -> AnalysisReport {
        AnalysisReport {
            input: MapEcho::of(f),
            mode: if S::EXACT { "exact" } else { "float" }.to_string(),
            membership: f.classify_membership().as_str().to_string(),
            kappa,
            trivial_chain: chain.iter().map(StepReport::of).collect(),
            cascade: cascade.steps.iter().map(StepReport::of).collect(),
            depth: cascade.depth_m,
            dichotomy: cascade
                .dichotomy_at_each_level
                .iter()
                .map(|d| d.as_str().to_string())
                .collect(),
            terminal: TerminalReport {
                map: MapEcho::of(&cascade.terminal),
                class: cascade.terminal_class.as_str().to_string(),
            },
            conjugacy: ConjugacyReport::of(conjugacy),
            timing_ms: None,
            warnings: cascade.warnings.clone(),
        }
    }
}
