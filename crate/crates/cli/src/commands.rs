use std::fmt;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use joints_core::algorithms::{self, AlgorithmError};
use joints_core::field::FieldSpec;
use joints_core::generators::{ConfigSpec, Family, GenerationError};
use joints_core::geometry::{self, GeometryError, JointOptions, LineCollection, Point};
use joints_core::interpolation::{dstar, minimal_vanishing_polynomial};
use joints_core::io::{
    collection_from_json, collection_to_json, sampling_csv, Bounds, ChoiceDoc, FormatError,
    JointsDoc, PeelDoc, PointSetDoc, PolynomialDoc, Ratio, RunReport, SamplingDoc,
    SlopePartitionDoc, WitnessDoc,
};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::{FamilyArg, GenArgs, InOut};

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Invariant(String),
    NotGeneric(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Invariant(_) => 1,
            CliError::Input(_) => 2,
            CliError::NotGeneric(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Invariant(m) => write!(f, "invariant violated: {m}"),
            CliError::NotGeneric(m) => write!(f, "{m}"),
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<GenerationError> for CliError {
    fn from(e: GenerationError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<AlgorithmError> for CliError {
    fn from(e: AlgorithmError) -> Self {
        match e {
            AlgorithmError::InvariantViolation(_) => CliError::Invariant(e.to_string()),
            AlgorithmError::NotGeneric(_) => CliError::NotGeneric(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Writes `content` to `out` through a temporary file and rename, or to stdout.
fn emit(out: Option<&Path>, content: &str) -> Result<()> {
    let Some(path) = out else {
        let mut stdout = std::io::stdout().lock();
        stdout.write_all(content.as_bytes())?;
        stdout.write_all(b"\n")?;
        return Ok(());
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(content.as_bytes())?;
    tmp.write_all(b"\n")?;
    tmp.persist(path)
        .map_err(|e| CliError::Input(e.to_string()))?;
    Ok(())
}

fn emit_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    emit(
        out,
        &serde_json::to_string_pretty(value).expect("serializable"),
    )
}

fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<(Vec<u8>, LineCollection)> {
    let bytes = read(path)?;
    let text = std::str::from_utf8(&bytes).map_err(|e| CliError::Input(e.to_string()))?;
    let c = collection_from_json(text)?;
    Ok((bytes, c))
}

fn required<T>(v: Option<T>, flag: &str, family: &str) -> Result<T> {
    v.ok_or_else(|| CliError::Input(format!("{family} needs --{flag}")))
}

pub fn gen(a: &GenArgs) -> Result<()> {
    let field = FieldSpec::new(a.field).map_err(|e| CliError::Input(e.to_string()))?;
    let family = match a.family {
        FamilyArg::Grid => Family::Grid {
            n: a.n,
            m: required(a.m, "m", "grid")?,
        },
        FamilyArg::Star => Family::Star {
            n: a.n,
            lines: required(a.lines, "lines", "star")?,
            seed: a.seed,
        },
        FamilyArg::Multistar => Family::MultiStar {
            n: a.n,
            centers: required(a.centers, "centers", "multistar")?,
            per_center: required(a.per_center, "per-center", "multistar")?,
            seed: a.seed,
        },
        FamilyArg::Plane => Family::PlaneWithVerticals {
            p: a.p.unwrap_or(a.field),
        },
        FamilyArg::Pencil => Family::AxisWithPencil {
            m: required(a.m, "m", "pencil")?,
        },
        FamilyArg::Random => Family::Random {
            n: a.n,
            lines: required(a.lines, "lines", "random")?,
            seed: a.seed,
        },
    };
    let field = match family {
        Family::PlaneWithVerticals { p } => {
            FieldSpec::prime(p).map_err(|e| CliError::Input(e.to_string()))?
        }
        _ => field,
    };
    let c = ConfigSpec { family, field }.generate()?;
    emit(a.out.as_deref(), &collection_to_json(&c))
}

pub fn joints(io: &InOut, cap: usize) -> Result<()> {
    let (_, c) = load(&io.input)?;
    let records = geometry::joints_with(
        &c,
        &JointOptions {
            enumeration_cap: cap,
        },
    )?;
    emit_json(io.out.as_deref(), &JointsDoc::new(&c, &records))
}

pub fn verify(io: &InOut, lambda: Option<u64>, timing: bool) -> Result<()> {
    let start = Instant::now();
    let (bytes, c) = load(&io.input)?;
    let records = geometry::joints(&c)?;
    let (n, l, j) = (c.dimension(), c.len() as u64, records.len() as u64);
    let theorem1 = algorithms::theorem1_bound(l, n);
    let mut pass = j <= theorem1;
    let mut j_lambda = None;
    let mut bounds = Bounds {
        theorem1,
        theorem2: None,
        theorem2_applies: None,
    };
    if let Some(lambda) = lambda {
        if lambda == 0 {
            return Err(CliError::Input("--lambda must be >= 1".into()));
        }
        let count = records.iter().filter(|r| r.multiplicity >= lambda).count();
        let b2 = algorithms::theorem2_bound(l, n, lambda);
        let generic = geometry::is_generic(&c)?.generic;
        pass &= !generic || count as u64 <= b2;
        j_lambda = Some(count);
        bounds.theorem2 = Some(b2);
        bounds.theorem2_applies = Some(generic);
    }
    let report = RunReport {
        command: "verify".into(),
        input_digest: hex::encode(Sha256::digest(&bytes)),
        field: c.spec(),
        n,
        lines: c.len(),
        merged_duplicates: c.merged_duplicates(),
        joints: records.len(),
        lambda,
        j_lambda,
        bounds,
        ratio: Ratio::new(j, l, n),
        pass,
        timing_ms: timing.then(|| start.elapsed().as_secs_f64() * 1e3),
    };
    emit_json(io.out.as_deref(), &report)?;
    if !pass {
        return Err(CliError::Invariant(format!(
            "{j} joints from {l} lines exceed the bound"
        )));
    }
    Ok(())
}

pub fn peel(io: &InOut) -> Result<()> {
    let (_, c) = load(&io.input)?;
    let trace = algorithms::peel(&c)?;
    emit_json(io.out.as_deref(), &PeelDoc::new(&trace))
}

pub fn choose(io: &InOut, lambda: u64, unchecked: bool) -> Result<()> {
    let (_, c) = load(&io.input)?;
    let result = if unchecked {
        algorithms::run_greedy_choice(&c, lambda)
    } else {
        algorithms::choose(&c, lambda)
    };
    match result {
        Ok(a) => emit_json(io.out.as_deref(), &ChoiceDoc::new(&a)),
        Err(AlgorithmError::NotGeneric(w)) => {
            emit_json(io.out.as_deref(), &WitnessDoc::new(&c, &w))?;
            Err(AlgorithmError::NotGeneric(w).into())
        }
        Err(e) => Err(e.into()),
    }
}

pub fn sample(io: &InOut, lambda: u64, trials: usize, seed: u64, csv: Option<&Path>) -> Result<()> {
    let (_, c) = load(&io.input)?;
    let r = algorithms::sample_survival(&c, lambda, trials, seed)?;
    if r.kept_counts.iter().any(|&k| k > r.line_count) {
        return Err(CliError::Invariant("kept more lines than exist".into()));
    }
    emit_json(io.out.as_deref(), &SamplingDoc::new(&r))?;
    if let Some(path) = csv {
        emit(Some(path), sampling_csv(&r).trim_end())?;
    }
    Ok(())
}

#[derive(Serialize)]
struct VanishDoc {
    points: usize,
    dstar: u32,
    degree: u32,
    polynomial: PolynomialDoc,
}

/// Accepts a point-set file or a line collection, whose joints are used.
fn load_points(path: &Path) -> Result<Vec<Point>> {
    let bytes = read(path)?;
    let value: serde_json::Value =
        serde_json::from_slice(&bytes).map_err(|e| CliError::Input(e.to_string()))?;
    if value.get("points").is_some() {
        let doc: PointSetDoc =
            serde_json::from_value(value).map_err(|e| CliError::Input(e.to_string()))?;
        Ok(joints_core::io::points_from_doc(&doc)?)
    } else {
        let c = collection_from_json(std::str::from_utf8(&bytes).unwrap_or_default())?;
        Ok(geometry::joints(&c)?.into_iter().map(|j| j.point).collect())
    }
}

pub fn vanish(io: &InOut) -> Result<()> {
    let points = load_points(&io.input)?;
    if points.is_empty() {
        return Err(CliError::Input("no points to interpolate".into()));
    }
    let m = minimal_vanishing_polynomial(&points).map_err(|e| CliError::Input(e.to_string()))?;
    for x in &points {
        let v = m
            .polynomial
            .evaluate(x.coords())
            .map_err(|e| CliError::Input(e.to_string()))?;
        if !v.is_zero() {
            return Err(CliError::Invariant(format!(
                "polynomial does not vanish at {x}"
            )));
        }
    }
    let doc = VanishDoc {
        points: points.len(),
        dstar: dstar(points[0].dimension(), points.len() as u64),
        degree: m.degree,
        polynomial: PolynomialDoc::from_polynomial(&m.polynomial),
    };
    emit_json(io.out.as_deref(), &doc)
}

pub fn slope_partition(p: u64, k: u64, out: Option<&Path>) -> Result<()> {
    let s = algorithms::slope_partition_choice(p, k)?;
    emit_json(out, &SlopePartitionDoc::new(&s))
}
