//! JSON and CSV formats.
//!
//! Field elements are written as decimal strings (`"13"`, `"3/4"`) so that no
//! reader has to guess an integer width.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algorithms::{ChoiceAssignment, PeelingTrace, SamplingReport, SlopePartition};
use crate::field::{FieldElement, FieldError, FieldSpec};
use crate::geometry::{GenericityWitness, GeometryError, JointRecord, Line, LineCollection, Point};
use crate::polynomial::{MultivariatePolynomial, PolynomialError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Polynomial(#[from] PolynomialError),
    #[error("{0}")]
    Shape(String),
}

fn parse_all(spec: FieldSpec, xs: &[String]) -> Result<Vec<FieldElement>, FieldError> {
    xs.iter().map(|s| spec.parse(s)).collect()
}

fn render(xs: &[FieldElement]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LineDoc {
    pub base: Vec<String>,
    pub dir: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CollectionDoc {
    pub field: FieldSpec,
    pub n: usize,
    pub lines: Vec<LineDoc>,
}

impl CollectionDoc {
    pub fn from_collection(c: &LineCollection) -> Self {
        CollectionDoc {
            field: c.spec(),
            n: c.dimension(),
            lines: c
                .lines()
                .iter()
                .map(|l| LineDoc {
                    base: render(l.base().coords()),
                    dir: render(l.dir()),
                })
                .collect(),
        }
    }

    /// Canonicalizes and deduplicates the lines.
    pub fn to_collection(&self) -> Result<LineCollection, FormatError> {
        let mut lines = Vec::with_capacity(self.lines.len());
        for (i, l) in self.lines.iter().enumerate() {
            if l.base.len() != self.n || l.dir.len() != self.n {
                return Err(FormatError::Shape(format!(
                    "line {i} does not have {} coordinates",
                    self.n
                )));
            }
            let base = Point::new(parse_all(self.field, &l.base)?)?;
            lines.push(Line::new(base, parse_all(self.field, &l.dir)?)?);
        }
        Ok(LineCollection::new(self.field, self.n, lines)?)
    }
}

pub fn collection_to_json(c: &LineCollection) -> String {
    serde_json::to_string_pretty(&CollectionDoc::from_collection(c)).expect("serializable")
}

pub fn collection_from_json(s: &str) -> Result<LineCollection, FormatError> {
    serde_json::from_str::<CollectionDoc>(s)?.to_collection()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointSetDoc {
    pub field: FieldSpec,
    pub n: usize,
    pub points: Vec<Vec<String>>,
}

pub fn points_to_json(spec: FieldSpec, n: usize, points: &[Point]) -> String {
    let doc = PointSetDoc {
        field: spec,
        n,
        points: points.iter().map(|x| render(x.coords())).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

pub fn points_from_doc(doc: &PointSetDoc) -> Result<Vec<Point>, FormatError> {
    doc.points
        .iter()
        .map(|c| {
            if c.len() != doc.n {
                return Err(FormatError::Shape(format!(
                    "point {c:?} is not in F^{}",
                    doc.n
                )));
            }
            Ok(Point::new(parse_all(doc.field, c)?)?)
        })
        .collect()
}

pub fn points_from_json(s: &str) -> Result<(FieldSpec, usize, Vec<Point>), FormatError> {
    let doc: PointSetDoc = serde_json::from_str(s)?;
    let pts = points_from_doc(&doc)?;
    Ok((doc.field, doc.n, pts))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermDoc {
    pub exps: Vec<u32>,
    pub coeff: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolynomialDoc {
    pub field: FieldSpec,
    pub nvars: usize,
    pub terms: Vec<TermDoc>,
}

impl PolynomialDoc {
    pub fn from_polynomial(f: &MultivariatePolynomial) -> Self {
        PolynomialDoc {
            field: f.spec(),
            nvars: f.nvars(),
            terms: f
                .terms()
                .map(|(e, c)| TermDoc {
                    exps: e.clone(),
                    coeff: c.to_string(),
                })
                .collect(),
        }
    }

    pub fn to_polynomial(&self) -> Result<MultivariatePolynomial, FormatError> {
        let terms = self
            .terms
            .iter()
            .map(|t| Ok((t.exps.clone(), self.field.parse(&t.coeff)?)))
            .collect::<Result<Vec<_>, FieldError>>()?;
        Ok(MultivariatePolynomial::from_terms(
            self.field, self.nvars, terms,
        )?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JointDoc {
    pub point: Vec<String>,
    pub lines: Vec<usize>,
    pub multiplicity: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JointsSummary {
    pub field: FieldSpec,
    pub n: usize,
    pub lines: usize,
    pub merged_duplicates: usize,
    pub joints: usize,
    pub max_multiplicity: u64,
    pub total_multiplicity: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JointsDoc {
    pub joints: Vec<JointDoc>,
    pub summary: JointsSummary,
}

impl JointsDoc {
    pub fn new(c: &LineCollection, records: &[JointRecord]) -> Self {
        JointsDoc {
            joints: records
                .iter()
                .map(|r| JointDoc {
                    point: render(r.point.coords()),
                    lines: r.incident_lines.clone(),
                    multiplicity: r.multiplicity,
                })
                .collect(),
            summary: JointsSummary {
                field: c.spec(),
                n: c.dimension(),
                lines: c.len(),
                merged_duplicates: c.merged_duplicates(),
                joints: records.len(),
                max_multiplicity: records.iter().map(|r| r.multiplicity).max().unwrap_or(0),
                total_multiplicity: records.iter().map(|r| r.multiplicity).sum(),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub point: Vec<String>,
    pub lines: Vec<usize>,
    pub directions: Vec<Vec<String>>,
    pub rank: usize,
}

impl WitnessDoc {
    pub fn new(c: &LineCollection, w: &GenericityWitness) -> Self {
        let dirs: Vec<&[FieldElement]> = w.lines.iter().map(|&i| c.line(i).dir()).collect();
        WitnessDoc {
            point: render(w.point.coords()),
            lines: w.lines.clone(),
            directions: dirs.iter().map(|d| render(d)).collect(),
            rank: crate::linalg::rank_of(c.spec(), &dirs),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PeelStepDoc {
    pub line: usize,
    pub remaining_before: usize,
    pub bound: u32,
    pub points: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PeelDoc {
    pub n: usize,
    pub lines: usize,
    pub joints: usize,
    pub parts: usize,
    pub max_part: usize,
    pub dstar_of_joints: u32,
    pub steps: Vec<PeelStepDoc>,
}

impl PeelDoc {
    pub fn new(t: &PeelingTrace) -> Self {
        PeelDoc {
            n: t.n,
            lines: t.line_count,
            joints: t.joint_count,
            parts: t.parts().count(),
            max_part: t.max_part(),
            dstar_of_joints: crate::interpolation::dstar(t.n, t.joint_count as u64),
            steps: t
                .steps
                .iter()
                .map(|s| PeelStepDoc {
                    line: s.line,
                    remaining_before: s.remaining_before,
                    bound: crate::interpolation::dstar(t.n, s.remaining_before as u64),
                    points: s.points.iter().map(|x| render(x.coords())).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChoiceStepDoc {
    pub line: usize,
    pub choosers: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointChoiceDoc {
    pub point: Vec<String>,
    pub multiplicity: u64,
    pub lines: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChoiceDoc {
    pub lambda: u64,
    pub n: usize,
    pub lines: usize,
    pub j_lambda: usize,
    pub per_point_lower_bound: i64,
    pub per_line_upper_bound: usize,
    pub min_choices: Option<usize>,
    pub max_choosers: usize,
    pub steps: Vec<ChoiceStepDoc>,
    pub points: Vec<PointChoiceDoc>,
}

impl ChoiceDoc {
    pub fn new(a: &ChoiceAssignment) -> Self {
        ChoiceDoc {
            lambda: a.lambda,
            n: a.n,
            lines: a.line_count,
            j_lambda: a.j_lambda(),
            per_point_lower_bound: a.per_point_lower_bound(),
            per_line_upper_bound: a.per_line_upper_bound(),
            min_choices: a.min_choices(),
            max_choosers: a.max_choosers(),
            steps: a
                .steps
                .iter()
                .map(|s| ChoiceStepDoc {
                    line: s.line,
                    choosers: s.choosers.len(),
                })
                .collect(),
            points: a
                .points
                .iter()
                .map(|p| PointChoiceDoc {
                    point: render(p.point.coords()),
                    multiplicity: p.multiplicity,
                    lines: p.lines.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SamplingDoc {
    pub lambda: u64,
    pub n: usize,
    pub lines: usize,
    pub trials: usize,
    pub seed: u64,
    pub keep_probability: f64,
    pub expected_kept: f64,
    pub mean_kept: f64,
    pub standard_error: f64,
    pub survival_frequency: f64,
    pub tracked: Vec<Vec<String>>,
    pub tracked_frequencies: Vec<f64>,
    pub kept_counts: Vec<usize>,
    /// `survived[trial][i]` for tracked point `i`.
    pub survived: Vec<Vec<bool>>,
}

impl SamplingDoc {
    pub fn new(r: &SamplingReport) -> Self {
        SamplingDoc {
            lambda: r.lambda,
            n: r.n,
            lines: r.line_count,
            trials: r.trials,
            seed: r.seed,
            keep_probability: r.keep_probability,
            expected_kept: r.expected_kept(),
            mean_kept: r.mean_kept(),
            standard_error: r.standard_error(),
            survival_frequency: r.survival_frequency(),
            tracked: r.tracked.iter().map(|x| render(x.coords())).collect(),
            tracked_frequencies: (0..r.tracked.len())
                .map(|i| r.survival_frequency_of(i))
                .collect(),
            kept_counts: r.kept_counts.clone(),
            survived: r.survived.clone(),
        }
    }
}

pub fn sampling_csv(r: &SamplingReport) -> String {
    let mut out = String::from("trial,kept_lines,survivors\n");
    for t in 0..r.trials {
        writeln!(out, "{t},{},{}", r.kept_counts[t], r.survivors(t)).expect("string write");
    }
    out
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SlopePartitionDoc {
    pub p: u64,
    pub k: u64,
    pub m: usize,
    pub blocks: Vec<Vec<u64>>,
    pub min_choices: usize,
    pub max_choices: usize,
    pub max_choosers_nonzero_slope: usize,
    pub chooser_counts: Vec<usize>,
}

impl SlopePartitionDoc {
    pub fn new(s: &SlopePartition) -> Self {
        SlopePartitionDoc {
            p: s.p,
            k: s.k,
            m: s.m,
            blocks: s.blocks.clone(),
            min_choices: s.choice_counts().min().unwrap_or(0),
            max_choices: s.choice_counts().max().unwrap_or(0),
            max_choosers_nonzero_slope: s.max_choosers_nonzero_slope(),
            chooser_counts: s.chooser_counts.clone(),
        }
    }
}

/// `|J| / L^(n/(n-1))` kept exact through its `(n-1)`-th power,
/// `|J|^(n-1) / L^n`; `decimal` is a floating rendering of the ratio itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ratio {
    /// `|J|^(n-1) / L^n` in lowest terms; `None` when `L = 0`.
    pub power_form: Option<String>,
    pub exponent: usize,
    pub decimal: Option<f64>,
}

impl Ratio {
    pub fn new(joints: u64, lines: u64, n: usize) -> Self {
        if lines == 0 {
            return Ratio {
                power_form: None,
                exponent: n - 1,
                decimal: None,
            };
        }
        let num = BigUint::from(joints).pow(n as u32 - 1);
        let den = BigUint::from(lines).pow(n as u32);
        let q = BigRational::new(num.into(), den.into());
        let decimal = joints as f64 / (lines as f64).powf(n as f64 / (n as f64 - 1.0));
        Ratio {
            power_form: Some(q.to_string()),
            exponent: n - 1,
            decimal: Some(decimal),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub theorem1: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theorem2: Option<u64>,
    /// Whether the collection is generic, which the second bound requires.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theorem2_applies: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub input_digest: String,
    pub field: FieldSpec,
    pub n: usize,
    #[serde(rename = "L")]
    pub lines: usize,
    pub merged_duplicates: usize,
    #[serde(rename = "J")]
    pub joints: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j_lambda: Option<usize>,
    pub bounds: Bounds,
    pub ratio: Ratio,
    pub pass: bool,
    /// Wall-clock milliseconds; only present when requested, since it breaks
    /// byte-for-byte reproducibility.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}
