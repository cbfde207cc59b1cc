use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::labeling::IndexMap;
use crate::relterm::PolyInterpretation;
use crate::term::{Name, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "linear-rl")]
    LinearRl,
    #[serde(rename = "valley-rl")]
    ValleyRl,
    #[serde(rename = "conv-rl")]
    ConvRl,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::LinearRl => "linear-rl",
            Mode::ValleyRl => "valley-rl",
            Mode::ConvRl => "conv-rl",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StepDir {
    #[serde(rename = "fw")]
    Forward,
    #[serde(rename = "bw")]
    Backward,
}

/// A step in a certificate: rule by 1-based index, position, direction and
/// the term reached. The matcher is re-derived when `subst` is absent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StepSpec {
    pub rule: usize,
    pub pos: Vec<usize>,
    pub dir: StepDir,
    pub to: Term,
    pub subst: Option<BTreeMap<Name, Term>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SideSpec {
    Conv {
        conv1: Vec<StepSpec>,
        step: Option<StepSpec>,
        conv2: Vec<StepSpec>,
    },
    Seq(Vec<StepSpec>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PeakEntry {
    pub source: Term,
    pub left: SideSpec,
    pub right: SideSpec,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelTermEvidence {
    None,
    Assumed,
    Interpretation(PolyInterpretation),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub mode: Mode,
    pub labels: IndexMap,
    pub relterm: RelTermEvidence,
    pub fan_bound: Option<usize>,
    pub peaks: Vec<PeakEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("{path}: {message}")]
    Json { path: String, message: String },
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
}

// Wire format.

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WireTerm {
    Var {
        var: String,
    },
    Fun {
        fun: String,
        #[serde(default)]
        args: Vec<WireTerm>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireStep {
    rule: usize,
    pos: Vec<usize>,
    dir: StepDir,
    to: WireTerm,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    subst: Option<BTreeMap<String, WireTerm>>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WireSide {
    Seq {
        seq: Vec<WireStep>,
    },
    Conv {
        conv1: Vec<WireStep>,
        #[serde(default)]
        step: Option<WireStep>,
        conv2: Vec<WireStep>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WirePeak {
    source: WireTerm,
    left: WireSide,
    right: WireSide,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WireRel {
    Tag(String),
    Interpretation {
        interpretation: BTreeMap<String, Vec<u64>>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireCert {
    mode: Mode,
    labels: Vec<u32>,
    #[serde(default)]
    relative_termination: Option<WireRel>,
    #[serde(default)]
    fan_bound: Option<usize>,
    peaks: Vec<WirePeak>,
}

fn term_to_wire(t: &Term) -> WireTerm {
    match t {
        Term::Var(x) => WireTerm::Var { var: x.to_string() },
        Term::Fun(f, args) => WireTerm::Fun {
            fun: f.to_string(),
            args: args.iter().map(term_to_wire).collect(),
        },
    }
}

fn term_from_wire(w: WireTerm) -> Term {
    match w {
        WireTerm::Var { var } => Term::Var(Name::new(&var)),
        WireTerm::Fun { fun, args } => Term::Fun(Name::new(&fun), args.into_iter().map(term_from_wire).collect()),
    }
}

fn step_to_wire(s: &StepSpec) -> WireStep {
    WireStep {
        rule: s.rule,
        pos: s.pos.clone(),
        dir: s.dir,
        to: term_to_wire(&s.to),
        subst: s
            .subst
            .as_ref()
            .map(|m| m.iter().map(|(x, t)| (x.to_string(), term_to_wire(t))).collect()),
    }
}

fn step_from_wire(w: WireStep) -> StepSpec {
    StepSpec {
        rule: w.rule,
        pos: w.pos,
        dir: w.dir,
        to: term_from_wire(w.to),
        subst: w
            .subst
            .map(|m| m.into_iter().map(|(x, t)| (Name::new(&x), term_from_wire(t))).collect()),
    }
}

fn side_to_wire(s: &SideSpec) -> WireSide {
    match s {
        SideSpec::Conv { conv1, step, conv2 } => WireSide::Conv {
            conv1: conv1.iter().map(step_to_wire).collect(),
            step: step.as_ref().map(step_to_wire),
            conv2: conv2.iter().map(step_to_wire).collect(),
        },
        SideSpec::Seq(seq) => WireSide::Seq {
            seq: seq.iter().map(step_to_wire).collect(),
        },
    }
}

fn side_from_wire(w: WireSide) -> SideSpec {
    match w {
        WireSide::Conv { conv1, step, conv2 } => SideSpec::Conv {
            conv1: conv1.into_iter().map(step_from_wire).collect(),
            step: step.map(step_from_wire),
            conv2: conv2.into_iter().map(step_from_wire).collect(),
        },
        WireSide::Seq { seq } => SideSpec::Seq(seq.into_iter().map(step_from_wire).collect()),
    }
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> CertificateError {
    CertificateError::Schema {
        path: path.into(),
        message: message.into(),
    }
}

impl Certificate {
    fn to_wire(&self) -> WireCert {
        WireCert {
            mode: self.mode,
            labels: self.labels.0.clone(),
            relative_termination: match &self.relterm {
                RelTermEvidence::None => None,
                RelTermEvidence::Assumed => Some(WireRel::Tag("assumed".into())),
                RelTermEvidence::Interpretation(ip) => Some(WireRel::Interpretation {
                    interpretation: ip
                        .iter()
                        .map(|(f, c, a)| {
                            let mut v = vec![c];
                            v.extend_from_slice(a);
                            (f.to_string(), v)
                        })
                        .collect(),
                }),
            },
            fan_bound: self.fan_bound,
            peaks: self
                .peaks
                .iter()
                .map(|e| WirePeak {
                    source: term_to_wire(&e.source),
                    left: side_to_wire(&e.left),
                    right: side_to_wire(&e.right),
                })
                .collect(),
        }
    }

    fn from_wire(w: WireCert) -> Result<Self, CertificateError> {
        let relterm = match w.relative_termination {
            None => RelTermEvidence::None,
            Some(WireRel::Tag(s)) if s == "assumed" => RelTermEvidence::Assumed,
            Some(WireRel::Tag(s)) => {
                return Err(schema(
                    "relative_termination",
                    format!("expected \"assumed\", an interpretation or null, found \"{s}\""),
                ))
            }
            Some(WireRel::Interpretation { interpretation }) => {
                let mut ip = PolyInterpretation::new();
                for (f, v) in interpretation {
                    let path = format!("relative_termination.interpretation.{f}");
                    let Some((&c, a)) = v.split_first() else {
                        return Err(schema(path, "expected [constant, coefficients...]"));
                    };
                    ip.insert(Name::new(&f), c, a.to_vec())
                        .map_err(|e| schema(path, e.to_string()))?;
                }
                RelTermEvidence::Interpretation(ip)
            }
        };
        match w.mode {
            Mode::LinearRl => {
                if w.fan_bound.is_some() {
                    return Err(schema("fan_bound", "must be null in linear-rl mode"));
                }
                if relterm != RelTermEvidence::None {
                    return Err(schema("relative_termination", "must be null in linear-rl mode"));
                }
            }
            Mode::ValleyRl => {
                if w.fan_bound.is_some() {
                    return Err(schema("fan_bound", "must be null in valley-rl mode"));
                }
            }
            Mode::ConvRl => {
                if w.fan_bound.is_none() {
                    return Err(schema("fan_bound", "required in conv-rl mode"));
                }
            }
        }
        let want_seq = w.mode == Mode::ValleyRl;
        let mut peaks = Vec::with_capacity(w.peaks.len());
        for (i, p) in w.peaks.into_iter().enumerate() {
            for (name, side) in [("left", &p.left), ("right", &p.right)] {
                let is_seq = matches!(side, WireSide::Seq { .. });
                if is_seq != want_seq {
                    let shape = if want_seq { "{\"seq\": [...]}" } else { "{\"conv1\", \"step\", \"conv2\"}" };
                    return Err(schema(
                        format!("peaks[{i}].{name}"),
                        format!("{} mode expects {shape}", w.mode.as_str()),
                    ));
                }
            }
            peaks.push(PeakEntry {
                source: term_from_wire(p.source),
                left: side_from_wire(p.left),
                right: side_from_wire(p.right),
            });
        }
        Ok(Certificate {
            mode: w.mode,
            labels: IndexMap::new(w.labels),
            relterm,
            fan_bound: w.fan_bound,
            peaks,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_wire()).expect("certificate serializes")
    }
}

pub fn parse_certificate(text: &str) -> Result<Certificate, CertificateError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let wire: WireCert = serde_path_to_error::deserialize(de).map_err(|e| CertificateError::Json {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    Certificate::from_wire(wire)
}
