//! The `toric-diamond` command line: JSON in, JSON (or SVG) out.
//!
//! Exit codes: 0 on success, 1 on a domain error (the error is written to
//! stderr as `{"code", "message", "context"}`), 2 on malformed input.

pub mod svg;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use toric_diamond_core::diamond::{
    family_galicki_lawson, family_general, isotropy_to_diamond, isotropy_to_polygon,
    polygon_to_diamond, polygon_to_isotropy_with_shear, weights_to_diamond,
};
use toric_diamond_core::guillemin::{volume_check, LabeledPolytope};
use toric_diamond_core::json::JsonInt;
use toric_diamond_core::lattice::shoelace_area;
use toric_diamond_core::reduction::{
    determinantal_divisor, g_omega_order, g_omega_order_bruteforce_with_limit, is_admissible,
    is_nondegenerate, is_reduced, isotropy_data, s_omega_cohomology, DEFAULT_BRUTEFORCE_LIMIT,
};
use toric_diamond_core::toric::{
    admits_kahler_einstein, fano_index, homology_of_m, is_fano, is_special_symmetric, is_symmetric,
    orbifold_report, pi1_orb_trivial, seifert_total_space_smooth, sigma_polytope, symmetry_group,
};
use toric_diamond_core::{
    AugmentedFan, ConvexLatticePolygon, Error, IsotropyData, LatVec, SupportFunction, WeightMatrix,
};

pub use svg::{render_svg, SvgOptions};

/// Environment variable capping the size of brute-force tree enumeration.
pub const MAX_K_VAR: &str = "TORIC_DIAMOND_MAX_K";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Invariants of a fan given by its marked points.
    AnalyzeFan,
    /// Minors, admissibility and torsion of a weight matrix.
    AnalyzeWeights,
    /// The full report from weights, isotropy data or a polygon.
    Diamond,
    /// One report per line for a family of weight matrices.
    Family,
    /// Polygon to isotropy data and back.
    Roundtrip,
    /// SVG drawing of a polygon.
    Render,
}

#[derive(Debug, Parser)]
#[command(
    name = "toric-diamond",
    version,
    about = "Invariants of toric Fano surfaces and their Sasakian-Einstein circle bundles"
)]
pub struct JobSpec {
    #[arg(value_enum)]
    pub command: Command,
    /// Weight matrix as a JSON list of rows.
    #[arg(long, group = "input")]
    pub weights: Option<String>,
    /// Lattice points as a JSON list of `[x, y]` pairs.
    #[arg(long, group = "input")]
    pub polygon: Option<String>,
    /// Isotropy vectors as a JSON list of `[x, y]` pairs.
    #[arg(long, group = "input")]
    pub isotropy: Option<String>,
    /// Galicki-Lawson family: members `q = 1..=N`.
    #[arg(long)]
    pub q: Option<u64>,
    /// General family: matrix height.
    #[arg(long)]
    pub k: Option<usize>,
    /// General family: number of members.
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Sample count for the Monte Carlo volume check of `analyze-fan`.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Write the result here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Emit the polygon as SVG instead of JSON.
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{message}")]
    Malformed { message: String, context: Value },
    #[error(transparent)]
    Domain(#[from] Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    fn malformed(message: impl Into<String>, context: Value) -> Self {
        CliError::Malformed {
            message: message.into(),
            context,
        }
    }

    fn exit_code(&self) -> i32 {
        match self {
            CliError::Malformed { .. } => 2,
            CliError::Domain(_) | CliError::Io { .. } => 1,
        }
    }

    fn to_json(&self, spec: Option<&JobSpec>) -> Value {
        let cmd = spec
            .and_then(|s| s.command.to_possible_value())
            .map(|v| v.get_name().to_string());
        let (code, context) = match self {
            CliError::Malformed { context, .. } => ("MALFORMED_INPUT", context.clone()),
            CliError::Domain(e) => (e.code(), json!({})),
            CliError::Io { path, .. } => ("IO_ERROR", json!({ "path": path })),
        };
        let mut context = context;
        if let (Some(cmd), Value::Object(map)) = (cmd, &mut context) {
            map.insert("command".into(), Value::String(cmd));
            let spec = spec.expect("command implies a parsed job");
            for (flag, value) in [
                ("weights", &spec.weights),
                ("polygon", &spec.polygon),
                ("isotropy", &spec.isotropy),
            ] {
                if let Some(v) = value {
                    map.entry("input").or_insert_with(|| json!({ flag: v }));
                }
            }
        }
        json!({ "code": code, "message": self.to_string(), "context": context })
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parse `argv` (program name first), execute, and return the exit code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let spec = match JobSpec::try_parse_from(argv) {
        Ok(spec) => spec,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let report = CliError::malformed(e.to_string().trim().to_string(), json!({}));
            let _ = writeln!(err, "{}", report.to_json(None));
            return 2;
        }
    };
    match execute(&spec).and_then(|text| emit(&spec, &text, out)) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "{}", e.to_json(Some(&spec)));
            e.exit_code()
        }
    }
}

fn emit(spec: &JobSpec, text: &str, out: &mut dyn Write) -> CliResult<()> {
    match &spec.out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => out
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

fn execute(spec: &JobSpec) -> CliResult<String> {
    match spec.command {
        Command::AnalyzeFan => analyze_fan(spec),
        Command::AnalyzeWeights => analyze_weights(spec),
        Command::Diamond => diamond(spec),
        Command::Family => family(spec),
        Command::Roundtrip => roundtrip(spec),
        Command::Render => {
            let p = polygon_input(spec)?;
            Ok(render_svg(&p, &SvgOptions::default()))
        }
    }
}

fn document(v: &impl Serialize) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    Ok(s)
}

fn int(v: &BigInt) -> Value {
    serde_json::to_value(JsonInt(v.clone())).expect("integers serialize")
}

fn rational(v: &BigRational) -> Value {
    json!({ "num": v.numer().to_string(), "den": v.denom().to_string() })
}

fn to_value(v: &impl Serialize) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn parse_json<T: serde::de::DeserializeOwned>(flag: &str, text: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| {
        CliError::malformed(
            format!("--{flag}: {e}"),
            json!({ "argument": flag, "input": text }),
        )
    })
}

fn parse_points(flag: &str, text: &str) -> CliResult<Vec<LatVec>> {
    let pairs: Vec<[JsonInt; 2]> = parse_json(flag, text)?;
    Ok(pairs
        .into_iter()
        .map(|[x, y]| LatVec::new(x.0, y.0))
        .collect())
}

fn parse_weights(text: &str) -> CliResult<WeightMatrix> {
    let rows: Vec<Vec<JsonInt>> = parse_json("weights", text)?;
    let rows = rows
        .into_iter()
        .map(|r| r.into_iter().map(|x| x.0).collect())
        .collect();
    Ok(WeightMatrix::new(rows)?)
}

fn missing(what: &str) -> CliError {
    CliError::malformed(format!("missing {what}"), json!({ "argument": what }))
}

fn polygon_input(spec: &JobSpec) -> CliResult<ConvexLatticePolygon> {
    if let Some(text) = &spec.polygon {
        return Ok(ConvexLatticePolygon::from_vertex_set(&parse_points(
            "polygon", text,
        )?)?);
    }
    if let Some(text) = &spec.isotropy {
        let d = IsotropyData::new(parse_points("isotropy", text)?)?;
        return Ok(isotropy_to_polygon(&d)?);
    }
    if let Some(text) = &spec.weights {
        let w = parse_weights(text)?;
        return Ok(weights_to_diamond(&w)?.polygon);
    }
    Err(missing("--polygon, --isotropy or --weights"))
}

fn brute_force_limit() -> CliResult<usize> {
    match std::env::var(MAX_K_VAR) {
        Err(_) => Ok(DEFAULT_BRUTEFORCE_LIMIT),
        Ok(v) => v.trim().parse().map_err(|_| {
            CliError::malformed(
                format!("{MAX_K_VAR} must be a non-negative integer, got {v:?}"),
                json!({ "argument": MAX_K_VAR }),
            )
        }),
    }
}

fn analyze_fan(spec: &JobSpec) -> CliResult<String> {
    let text = spec.polygon.as_ref().ok_or_else(|| missing("--polygon"))?;
    let fan = AugmentedFan::from_marks_unordered(&parse_points("polygon", text)?)?;
    if spec.svg {
        return Ok(render_svg(&fan.polygon()?, &SvgOptions::default()));
    }
    let fano = is_fano(&fan);
    let mut report = json!({
        "marks": to_value(&fan),
        "fano": fano,
        "symmetric": is_symmetric(&fan),
        "special_symmetric": is_special_symmetric(&fan),
        "symmetry_order": symmetry_group(&fan).order(),
        "admits_ke": admits_kahler_einstein(&fan),
        "orbifold": to_value(&orbifold_report(&fan)),
        "pi1_orb_trivial": pi1_orb_trivial(&fan),
        "index": Value::Null,
        "anticanonical_area": Value::Null,
        "seifert_smooth": Value::Null,
        "homology": Value::Null,
        "volume_check": Value::Null,
        "warnings": [],
    });
    if fano {
        let anti = SupportFunction::anticanonical(&fan);
        report["index"] = int(&fano_index(&fan)?);
        report["anticanonical_area"] = rational(&shoelace_area(&sigma_polytope(&fan, &anti)?)?);
        match seifert_total_space_smooth(&fan) {
            Ok(smooth) => {
                report["seifert_smooth"] = json!(smooth);
                if smooth && pi1_orb_trivial(&fan) {
                    report["homology"] = to_value(&homology_of_m(&fan)?);
                }
            }
            // competing roots of the anticanonical bundle; reported, not fatal
            Err(e @ Error::InternalInconsistency(_)) => {
                report["warnings"] = json!([{ "code": e.code(), "message": e.to_string() }]);
            }
            Err(e) => return Err(e.into()),
        }
        if let Some(samples) = spec.samples {
            let p = LabeledPolytope::from_fan(&fan, &anti)?;
            report["volume_check"] = to_value(&volume_check(&p, samples, spec.seed)?);
        }
    }
    document(&report)
}

fn analyze_weights(spec: &JobSpec) -> CliResult<String> {
    let text = spec.weights.as_ref().ok_or_else(|| missing("--weights"))?;
    let w = parse_weights(text)?;
    let limit = brute_force_limit()?;
    let nondegenerate = is_nondegenerate(&w);
    let admissible = is_admissible(&w)?;
    let mut report = json!({
        "weights": to_value(&w),
        "k": w.k(),
        "n": w.n(),
        "nondegenerate": nondegenerate,
        "admissible": admissible,
        "reduced": Value::Null,
        "determinantal_divisor": Value::Null,
        "g_omega_order": Value::Null,
        "g_omega_order_enumerated": Value::Null,
        "cohomology": Value::Null,
        "isotropy": Value::Null,
    });
    if nondegenerate {
        let reduced = is_reduced(&w);
        report["reduced"] = json!(reduced);
        report["determinantal_divisor"] = int(&determinantal_divisor(&w)?);
        report["g_omega_order"] = int(&g_omega_order(&w)?);
        match g_omega_order_bruteforce_with_limit(&w, limit) {
            Ok(n) => report["g_omega_order_enumerated"] = int(&n),
            Err(Error::TooLarge { .. }) => {}
            Err(e) => return Err(e.into()),
        }
        if admissible && reduced {
            report["cohomology"] = to_value(&s_omega_cohomology(&w)?);
            report["isotropy"] = to_value(&isotropy_data(&w)?);
        }
    }
    document(&report)
}

fn diamond(spec: &JobSpec) -> CliResult<String> {
    let report = if let Some(text) = &spec.weights {
        weights_to_diamond(&parse_weights(text)?)?
    } else if let Some(text) = &spec.isotropy {
        isotropy_to_diamond(&IsotropyData::new(parse_points("isotropy", text)?)?)?
    } else if let Some(text) = &spec.polygon {
        polygon_to_diamond(&ConvexLatticePolygon::from_vertex_set(&parse_points(
            "polygon", text,
        )?)?)?
    } else {
        return Err(missing("--weights, --isotropy or --polygon"));
    };
    if spec.svg {
        return Ok(render_svg(&report.polygon, &SvgOptions::default()));
    }
    document(&report)
}

fn ndjson_line(out: &mut String, v: &impl Serialize) {
    out.push_str(&serde_json::to_string(v).expect("reports serialize"));
    out.push('\n');
}

fn family(spec: &JobSpec) -> CliResult<String> {
    let mut out = String::new();
    match (spec.q, spec.k) {
        (Some(q), None) => {
            for member in 1..=q {
                let (_, report) = family_galicki_lawson(member)?;
                ndjson_line(&mut out, &report);
            }
        }
        (None, Some(k)) => {
            for w in family_general(k, spec.count, spec.seed)? {
                ndjson_line(&mut out, &weights_to_diamond(&w)?);
            }
        }
        (Some(_), Some(_)) => {
            return Err(CliError::malformed(
                "--q and --k are exclusive",
                json!({ "argument": "q" }),
            ))
        }
        (None, None) => return Err(missing("--q or --k")),
    }
    Ok(out)
}

fn roundtrip(spec: &JobSpec) -> CliResult<String> {
    let (isotropy, polygon) = if let Some(text) = &spec.polygon {
        let p = ConvexLatticePolygon::from_vertex_set(&parse_points("polygon", text)?)?;
        (None, p)
    } else if let Some(text) = &spec.isotropy {
        let d = IsotropyData::new(parse_points("isotropy", text)?)?;
        let p = isotropy_to_polygon(&d)?;
        (Some(d), p)
    } else if let Some(text) = &spec.weights {
        let d = isotropy_data(&parse_weights(text)?)?;
        let p = isotropy_to_polygon(&d)?;
        (Some(d), p)
    } else {
        return Err(missing("--polygon, --isotropy or --weights"));
    };
    let (recovered, shear) = polygon_to_isotropy_with_shear(&polygon)?;
    let rebuilt = isotropy_to_polygon(&recovered)?.map(&shear.inverse());
    if rebuilt != polygon {
        return Err(Error::InternalInconsistency(format!(
            "round trip changed the polygon: {:?} became {:?}",
            polygon
                .vertices()
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>(),
            rebuilt
                .vertices()
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>(),
        ))
        .into());
    }
    document(&json!({
        "isotropy": isotropy.map(|d| to_value(&d)),
        "polygon": to_value(&polygon),
        "recovered_isotropy": to_value(&recovered),
        "shear": to_value(&shear),
        "polygon_matches": true,
    }))
}
