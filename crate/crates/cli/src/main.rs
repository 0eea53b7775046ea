use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use serde_json::{json, Value};

use rainbow_core::coloring::{coarsen, greedy_fairify, is_fair, Coloring, FairnessParams};
use rainbow_core::field::{make_field, FieldError, FieldSpec};
use rainbow_core::geometry::{GeometryError, Plane, Triangle};
use rainbow_core::harness::{
    generate, load_coloring, records_csv, sweep, vinh_csv, vinh_experiment, vinh_subset_size,
    with_threads, write_coloring, ExperimentRecord, GeneratorKind, GeneratorSpec, HarnessError,
    Task,
};
use rainbow_core::rainbow::{
    find_rainbow, find_rainbow_size2, no_rainbow_bound_check, render, render_table,
    theorem_pipeline, verify_witness, OutputFormat, RainbowError, Report, SearchMode, Witness,
};

const EXIT_NONE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_FIELD: u8 = 3;

#[derive(Parser)]
#[command(
    name = "rainbow",
    version,
    about = "Unit triangles and rainbow colorings over F_q^2"
)]
struct Cli {
    #[command(flatten)]
    shared: Shared,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Shared {
    /// Field characteristic.
    #[arg(long, global = true)]
    p: Option<u64>,
    /// Extension degree.
    #[arg(long, global = true, default_value_t = 1)]
    k: u32,
    /// Monic modulus coefficients c0,c1,...,ck (k > 1 only).
    #[arg(long, global = true, value_delimiter = ',')]
    modulus: Option<Vec<u64>>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value = "text")]
    format: OutputFormat,
    /// Output file (standard output when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads, 0 for one per core.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Coloring file to read.
    #[arg(long = "in", global = true)]
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Size and vectors of the unit circle.
    Circle,
    /// Number of unit pairs in the plane.
    Pairs,
    /// Number of unit equilateral triangles.
    Triangles {
        /// Also print every triangle as three point indices.
        #[arg(long)]
        list: bool,
    },
    /// Square roots of 3, if any.
    Sqrt3,
    /// Search a coloring for rainbow triangles.
    FindRainbow {
        #[arg(long, value_enum, default_value_t = Mode::First)]
        mode: Mode,
    },
    /// Rainbow triangle in a coloring whose classes have at most two points.
    RainbowSize2,
    /// Greedy fairification of a coloring.
    Fairify {
        /// Write the fairified coloring here.
        #[arg(long)]
        save: Option<PathBuf>,
    },
    /// Coarsen a coloring into about u/10 classes.
    Coarsen {
        /// Target parameter, an integer or fraction a/b.
        #[arg(long)]
        u: Ratio<u64>,
        #[arg(long)]
        save: Option<PathBuf>,
    },
    /// Fairify, coarsen and search.
    Pipeline {
        /// Defaults to the ceiling of sqrt(q).
        #[arg(long)]
        u: Option<Ratio<u64>>,
    },
    /// The axis construction with no rainbow triangle, plus its pair-count check.
    ExampleDegenerate {
        #[arg(long)]
        save: Option<PathBuf>,
    },
    /// Unit pairs inside random point sets.
    Vinh {
        /// Points per set (default: ceiling of q^1.5).
        #[arg(long)]
        size: Option<u64>,
        #[arg(long, default_value_t = 20)]
        trials: u64,
    },
    /// Experiment sweep over field orders, written as CSV.
    Sweep {
        /// Field orders, comma separated.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        q: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_value = "counts")]
        tasks: Vec<Task>,
    },
    /// Write a generated coloring.
    Gen {
        #[arg(long)]
        kind: GeneratorKind,
        #[arg(long, default_value_t = 1)]
        colors: u64,
        /// Upper bound on every class of fair-random, as a fraction of q^2.
        #[arg(long)]
        max_class_fraction: Option<Ratio<u64>>,
    },
    /// Validate a coloring file, and optionally a witness triangle.
    Verify {
        /// Three point indices a,b,c.
        #[arg(long, value_delimiter = ',')]
        triangle: Option<Vec<u32>>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    First,
    All,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Field(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Field(_) => EXIT_FIELD,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Field(m) => m,
        }
    }
}

impl From<FieldError> for Failure {
    fn from(e: FieldError) -> Self {
        Failure::Field(e.to_string())
    }
}

impl From<GeometryError> for Failure {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::PlaneTooLarge(_) | GeometryError::Field(_) => {
                Failure::Field(e.to_string())
            }
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::BadField { .. } | HarnessError::InadmissibleField(_) => {
                Failure::Field(e.to_string())
            }
            HarnessError::Geometry(g) => g.into(),
            HarnessError::Rainbow(r) => r.into(),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<RainbowError> for Failure {
    fn from(e: RainbowError) -> Self {
        match e {
            RainbowError::Geometry(g) => g.into(),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// What a command produced: text for the output sink and whether it found
/// what it was looking for.
struct Outcome {
    text: String,
    found: bool,
}

impl Outcome {
    fn found(text: String) -> Outcome {
        Outcome { text, found: true }
    }
}

type Fields = Vec<(&'static str, Value)>;

fn field_from_flags(s: &Shared) -> Result<FieldSpec, Failure> {
    let p =
        s.p.ok_or_else(|| Failure::Usage("--p is required (or --in with a coloring file)".into()))?;
    Ok(make_field(p, s.k, s.modulus.as_deref(), s.seed)?)
}

/// The coloring from `--in`, checked against `--p/--k/--modulus` when those are given.
fn coloring_from_input(s: &Shared) -> Result<(FieldSpec, Coloring), Failure> {
    let path = s
        .input
        .as_ref()
        .ok_or_else(|| Failure::Usage("--in <coloring file> is required".into()))?;
    let file = File::open(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let (field, c) = load_coloring(BufReader::new(file))?;
    if s.p.is_some() {
        let expected = field_from_flags(s)?;
        if expected != field {
            return Err(HarnessError::FieldMismatch {
                expected,
                found: field,
            }
            .into());
        }
    }
    Ok((field, c))
}

fn save(field: &FieldSpec, c: &Coloring, path: &PathBuf) -> Result<(), Failure> {
    let file = File::create(path)?;
    write_coloring(field, c, io::BufWriter::new(file))?;
    Ok(())
}

fn point_pairs(plane: &Plane, indices: &[u32]) -> Value {
    json!(indices
        .iter()
        .map(|&i| {
            let pt = plane.point(i);
            format!("({},{})", pt.x1.encode(), pt.x2.encode())
        })
        .collect::<Vec<_>>())
}

fn base(field: &FieldSpec) -> Fields {
    vec![
        ("p", json!(field.p())),
        ("k", json!(field.k())),
        ("q", json!(field.q())),
    ]
}

struct Record<'a>(&'a ExperimentRecord);

impl Report for Record<'_> {
    fn fields(&self) -> Fields {
        let r = self.0;
        vec![
            ("q", json!(r.q)),
            ("p", json!(r.p)),
            ("k_field", json!(r.k_field)),
            ("circle_size", json!(r.circle_size)),
            ("ordered_pairs", json!(r.ordered_pairs)),
            ("triangles", json!(r.triangles)),
            ("coloring_seed", json!(r.coloring_seed)),
            ("color_count", json!(r.color_count)),
            ("pipeline_t", json!(r.pipeline_t)),
            ("pipeline_k", json!(r.pipeline_k)),
            ("rainbow_found", json!(r.rainbow_found)),
            ("elapsed_millis", json!(r.elapsed_millis)),
        ]
    }
}

fn witness_fields(plane: &Plane, w: &Witness) -> Fields {
    vec![
        ("witness", json!(w.triangle.indices())),
        ("witness_points", point_pairs(plane, &w.triangle.indices())),
        ("witness_colors", json!(w.colors)),
    ]
}

fn run(cmd: &Command, s: &Shared) -> Result<Outcome, Failure> {
    let fmt = s.format;
    match cmd {
        Command::Circle => {
            let field = field_from_flags(s)?;
            let plane = Plane::new(&field)?;
            let vectors: Vec<u32> = plane
                .circle()
                .vectors()
                .iter()
                .map(|v| v.index() as u32)
                .collect();
            let mut r = base(&field);
            r.push(("circle_size", json!(vectors.len())));
            r.push(("vectors", point_pairs(&plane, &vectors)));
            Ok(Outcome::found(render(&r, fmt)))
        }
        Command::Pairs => {
            let field = field_from_flags(s)?;
            let plane = Plane::new(&field)?;
            let mut r = base(&field);
            r.push(("circle_size", json!(plane.circle().len())));
            r.push(("ordered_pairs", json!(2 * plane.unordered_unit_pairs())));
            r.push(("unordered_pairs", json!(plane.unordered_unit_pairs())));
            Ok(Outcome::found(render(&r, fmt)))
        }
        Command::Triangles { list } => {
            let field = field_from_flags(s)?;
            let plane = Plane::new(&field)?;
            let mut r = base(&field);
            r.push(("triangles", json!(plane.count_triangles())));
            let mut text = render(&r, fmt);
            if *list {
                let rows: Vec<Fields> = plane
                    .triangles()
                    .map(|t| vec![("triangle", json!(t.indices()))])
                    .collect();
                let refs: Vec<&dyn Report> = rows.iter().map(|r| r as &dyn Report).collect();
                text.push_str(&render_table(&refs, fmt));
            }
            Ok(Outcome::found(text))
        }
        Command::Sqrt3 => {
            let field = field_from_flags(s)?;
            let root = field.from_int(3).sqrt();
            let mut r = base(&field);
            r.push((
                "sqrt3",
                json!(root.as_ref().map(|r| vec![r.low.encode(), r.high.encode()])),
            ));
            Ok(Outcome {
                text: render(&r, fmt),
                found: root.is_some(),
            })
        }
        Command::FindRainbow { mode } => {
            let (field, c) = coloring_from_input(s)?;
            let plane = Plane::new(&field)?;
            let mode = match mode {
                Mode::First => SearchMode::FirstWitness,
                Mode::All => SearchMode::CountAll,
            };
            let report = find_rainbow(&plane, &c, mode)?;
            Ok(Outcome {
                found: report.witness.is_some(),
                text: render(&report, fmt),
            })
        }
        Command::RainbowSize2 => {
            let (field, c) = coloring_from_input(s)?;
            let plane = Plane::new(&field)?;
            match find_rainbow_size2(&plane, &c) {
                Ok(w) => Ok(Outcome::found(render(&witness_fields(&plane, &w), fmt))),
                Err(RainbowError::NoTriangles) => Ok(Outcome {
                    text: render(&vec![("witness", Value::Null)], fmt),
                    found: false,
                }),
                Err(e) => Err(e.into()),
            }
        }
        Command::Fairify { save: path } => {
            let (field, c) = coloring_from_input(s)?;
            let (out, merges) = greedy_fairify(&c).map_err(RainbowError::from)?;
            if let Some(path) = path {
                save(&field, &out, path)?;
            }
            let r: Fields = vec![
                ("colors_in", json!(c.class_count())),
                ("t", json!(out.class_count())),
                ("merges", json!(merges.len())),
                ("max_class", json!(out.max_class_size())),
                ("min_class", json!(out.min_class_size())),
            ];
            Ok(Outcome::found(render(&r, fmt)))
        }
        Command::Coarsen { u, save: path } => {
            let (field, c) = coloring_from_input(s)?;
            let (out, trace) = coarsen(&c, *u).map_err(RainbowError::from)?;
            if let Some(path) = path {
                save(&field, &out, path)?;
            }
            let r: Fields = vec![
                ("t", json!(c.class_count())),
                ("k", json!(trace.k)),
                ("m", json!(trace.m.to_string())),
                ("ell", json!(trace.ell.to_string())),
                (
                    "branch",
                    json!(format!("{:?}", trace.branch).to_lowercase()),
                ),
                (
                    "group_sizes",
                    json!(trace.groups.iter().map(|g| g.size).collect::<Vec<_>>()),
                ),
            ];
            Ok(Outcome::found(render(&r, fmt)))
        }
        Command::Pipeline { u } => {
            let (field, c) = coloring_from_input(s)?;
            let plane = Plane::new(&field)?;
            let report = theorem_pipeline(&plane, &c, *u)?;
            Ok(Outcome {
                found: report.witness.is_some(),
                text: render(&report, fmt),
            })
        }
        Command::ExampleDegenerate { save: path } => {
            let field = field_from_flags(s)?;
            let plane = Plane::new(&field)?;
            let c = generate(
                &field,
                &GeneratorSpec::new(GeneratorKind::DegenerateExample, 0, s.seed),
            )?;
            if let Some(path) = path {
                save(&field, &c, path)?;
            }
            let check = no_rainbow_bound_check(&plane, &c)?;
            let mut r = base(&field);
            r.push(("colors", json!(c.class_count())));
            r.push(("blue_points", json!(c.max_class_size())));
            r.extend(check.fields());
            Ok(Outcome::found(render(&r, fmt)))
        }
        Command::Vinh { size, trials } => {
            let field = field_from_flags(s)?;
            let plane = Plane::new(&field)?;
            let n = size.unwrap_or_else(|| vinh_subset_size(field.q()));
            let stats = vinh_experiment(&plane, n, *trials, s.seed)?;
            let text = match fmt {
                OutputFormat::Csv => vinh_csv(&stats),
                _ => {
                    let refs: Vec<&dyn Report> = stats.iter().map(|r| r as &dyn Report).collect();
                    render_table(&refs, fmt)
                }
            };
            Ok(Outcome::found(text))
        }
        Command::Sweep { q, tasks } => {
            let records = sweep(q, tasks, s.seed)?;
            let text = match fmt {
                OutputFormat::Json => {
                    let rows: Vec<Record> = records.iter().map(Record).collect();
                    let refs: Vec<&dyn Report> = rows.iter().map(|r| r as &dyn Report).collect();
                    render_table(&refs, fmt)
                }
                _ => records_csv(&records),
            };
            Ok(Outcome::found(text))
        }
        Command::Gen {
            kind,
            colors,
            max_class_fraction,
        } => {
            let field = field_from_flags(s)?;
            let mut spec = GeneratorSpec::new(*kind, *colors, s.seed);
            spec.max_class_fraction = *max_class_fraction;
            let c = generate(&field, &spec)?;
            let mut buf = Vec::new();
            write_coloring(&field, &c, &mut buf)?;
            Ok(Outcome::found(String::from_utf8(buf).expect("ascii")))
        }
        Command::Verify { triangle } => {
            let (field, c) = coloring_from_input(s)?;
            let mut r = vec![("field", json!(field.header()))];
            r.push(("points", json!(c.ground_size())));
            r.push(("colors", json!(c.class_count())));
            r.push(("max_class", json!(c.max_class_size())));
            r.push(("min_class", json!(c.min_class_size())));
            r.push((
                "fair",
                json!(is_fair(&c, &FairnessParams::for_coloring(&c)).fair),
            ));
            let mut found = true;
            if let Some(t) = triangle {
                let &[a, b, c3] = t.as_slice() else {
                    return Err(Failure::Usage(
                        "--triangle takes exactly three indices".into(),
                    ));
                };
                let plane = Plane::new(&field)?;
                let points = plane.point_count();
                if let Some(&bad) = [a, b, c3].iter().find(|&&i| i >= points) {
                    return Err(Failure::Usage(format!(
                        "point index {bad} is outside [0, {points})"
                    )));
                }
                let tri = Triangle::from_indices([a, b, c3]);
                let w = Witness {
                    triangle: tri,
                    colors: tri.indices().map(|i| c.color_of(i)),
                };
                let unit = tri.verify(&field);
                let rainbow = verify_witness(&plane, &c, &w);
                r.push(("unit_triangle", json!(unit)));
                r.push(("rainbow", json!(rainbow)));
                found = unit && rainbow;
            }
            Ok(Outcome {
                text: render(&r, fmt),
                found,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = with_threads(cli.shared.threads, || run(&cli.command, &cli.shared))
        .map_err(Failure::from)
        .and_then(|r| r);
    let outcome = match result {
        Ok(o) => o,
        Err(f) => {
            eprintln!("error: {}", f.message());
            return ExitCode::from(f.code());
        }
    };
    let written = match &cli.shared.out {
        Some(path) => std::fs::write(path, &outcome.text),
        None => io::stdout().lock().write_all(outcome.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    if outcome.found {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_NONE)
    }
}
