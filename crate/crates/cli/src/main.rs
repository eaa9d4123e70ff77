//! `cq`: exact intersection numbers on complete quadrics and friends.

mod inputs;
mod output;

use std::collections::HashMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use cq_core::cells::{self, TwoPermutation};
use cq_core::error::{Error, Result};
use cq_core::exactmath::{rat_frac, ExactRational};
use cq_core::matroid::{self, Graph, Matroid};
use cq_core::quadrics::{self, CQProduct};
use cq_core::schubert::{self, Permutation};
use cq_core::segre;
use cq_core::toric::{self, Fan, ToricClass};

use output::{join, Outcome};

#[derive(Parser)]
#[command(name = "cq", version, about = "Exact intersection numbers on complete quadrics, flag and permutohedral varieties")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for interpolation sampling.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Include wall-clock time in the JSON metadata (makes output nondeterministic).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

/// Arbitrary-size integer argument, echoed as a JSON number.
#[derive(Clone, Debug)]
struct Int(BigInt);

impl std::str::FromStr for Int {
    type Err = num_bigint::ParseBigIntError;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        s.trim().parse().map(Int)
    }
}

impl Serialize for Int {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        output::int(&self.0).serialize(serializer)
    }
}

impl Int {
    fn unwrap(v: &[Int]) -> Vec<BigInt> {
        v.iter().map(|x| x.0.clone()).collect()
    }
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// ML-degree φ(n, d) of a generic d-dimensional space of symmetric n×n matrices.
    Phi {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u64,
    },
    /// φ(n, d) as a polynomial in n for fixed d.
    PhiPoly {
        #[arg(long)]
        d: u64,
    },
    /// Algebraic degree of semidefinite programming δ(m, n, r).
    Delta {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
    },
    /// δ(m, n, n−s) as a polynomial in n.
    DeltaPoly {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        s: usize,
    },
    /// ∫ L_c L_1^{C(n+1,2)−d−1} L_{n−1}^{d−1}.
    PhiC {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        c: usize,
        #[arg(long)]
        d: u64,
    },
    /// ∫ S^a L^b on CQ_n from raw exponent vectors.
    Product {
        #[arg(long)]
        n: usize,
        /// Exponents of S_1..S_{n−1} (default all zero).
        #[arg(long, value_delimiter = ',')]
        a: Option<Vec<u32>>,
        /// Exponents of L_1..L_{n−1}.
        #[arg(long, value_delimiter = ',')]
        b: Vec<u32>,
    },
    /// Whether (m, n, r) lies in the Pataki window.
    Pataki {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
    },
    /// ∫_{Fl_n} L_1^{b_1} ⋯ L_{n−1}^{b_{n−1}}.
    FlagIntegral {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        b: Vec<u32>,
    },
    /// σ_{s_i} · σ_w by Monk's rule.
    Monk {
        #[arg(long)]
        i: usize,
        /// Permutation in one-line notation, e.g. 2,1,3.
        #[arg(long, value_delimiter = ',')]
        w: Vec<usize>,
    },
    /// Matroid invariants.
    #[command(subcommand)]
    Matroid(MatroidCommand),
    /// Permutohedral and other smooth complete toric varieties.
    #[command(subcommand)]
    Toric(ToricCommand),
    /// 2-permutations and the cells of complete quadrics.
    Cells(CellsArgs),
    /// Multidegrees from Segre class degrees.
    #[command(subcommand)]
    Segre(SegreCommand),
    /// Characteristic number (n(d−1)^{n−1})^b of smooth hypersurfaces.
    HypersurfaceCount {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        b: u64,
    },
}

#[derive(Args, Serialize)]
#[group(required = true, multiple = false)]
struct MatroidSource {
    /// Graph file: "v e" then e lines "i j".
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Uniform matroid "r,n".
    #[arg(long, value_delimiter = ',')]
    uniform: Option<Vec<usize>>,
    /// Matrix whose rows span L; elements are independent modulo L.
    #[arg(long)]
    subspace: Option<PathBuf>,
    /// Matrix whose columns are the ground set.
    #[arg(long)]
    columns: Option<PathBuf>,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum MatroidCommand {
    /// Characteristic polynomial and, when defined, its reduced coefficients.
    Charpoly(MatroidSource),
    /// Unsigned reduced characteristic coefficients ν_0, ν_1, ...
    Reduced(MatroidSource),
    /// Chromatic polynomial of a graph.
    Chromatic {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Alternating sum Σ (−1)^i ν_i.
    Euler {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        nu: Vec<Int>,
    },
}

#[derive(Args, Serialize)]
#[group(required = true, multiple = false)]
struct FanSource {
    /// Fan file: "rank #rays #cones", rays, then 1-based cones.
    #[arg(long)]
    fan: Option<PathBuf>,
    /// Use the permutohedral fan of dimension N.
    #[arg(long)]
    permutohedral: Option<usize>,
}

impl FanSource {
    fn load(&self) -> Result<Fan> {
        match (&self.fan, self.permutohedral) {
            (Some(path), _) => Fan::parse(&inputs::read_file(path)?),
            (None, Some(n)) => toric::permutohedral_fan(n),
            (None, None) => Err(Error::InvalidInput("no fan given".into())),
        }
    }
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ToricCommand {
    /// Validate smoothness and completeness.
    FanCheck(FanSource),
    /// μ_i = ∫ H_1^{n−i} H_2^i on the permutohedral variety.
    MuGeneric {
        #[arg(long)]
        n: usize,
        /// Element of {1..n+1} defining H_1.
        #[arg(long, default_value_t = 1)]
        distinguished: usize,
    },
    /// Degree of a product of ray divisors (1-based, repeats allowed).
    Integral {
        #[command(flatten)]
        source: FanSource,
        #[arg(long, value_delimiter = ',')]
        rays: Vec<usize>,
    },
}

#[derive(Args, Serialize)]
#[command(args_conflicts_with_subcommands = true)]
struct CellsArgs {
    /// List 2-permutations of [n] with their weights.
    #[arg(long)]
    n: Option<usize>,
    /// Print the number of cells of each dimension instead.
    #[arg(long, requires = "n")]
    histogram: bool,
    #[command(subcommand)]
    action: Option<CellsCommand>,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum CellsCommand {
    /// All 2-permutations of [n].
    Enumerate {
        #[arg(long)]
        n: usize,
    },
    /// Weight (cell dimension) of a 2-permutation such as 2|13.
    Weight {
        #[arg(long)]
        sigma: String,
    },
    /// Symbolic X, Y, Ỹ, A and B of a cell.
    Param {
        #[arg(long)]
        sigma: String,
    },
    /// Check A·B = λ I at a point of the cell.
    Verify {
        #[arg(long)]
        sigma: String,
        /// Values such as "x13=1,x23=2/3,y1=5"; random nonzero values when omitted.
        #[arg(long)]
        values: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Serialize)]
struct SegreFormula {
    /// JSON such as {"degF":4,"nL":2,"mY":1,"s":[0,6]}, or @file.
    #[arg(long)]
    data: String,
    /// Single index; all i = 0..nL when omitted.
    #[arg(long)]
    i: Option<i64>,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum SegreCommand {
    Mu(SegreFormula),
    Nu(SegreFormula),
    /// ν_a = μ_a − Σ_{j ≤ b} C(n, j) s_j.
    Correct {
        #[arg(long, allow_hyphen_values = true)]
        mu: Int,
        #[arg(long)]
        n: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        s: Vec<i64>,
    },
    /// ν ≤ μ pointwise, with equality everywhere exactly when the last entries agree.
    Compare {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        mu: Vec<Int>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        nu: Vec<Int>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli.command, cli.jobs.max(1)) {
        Ok(outcome) => {
            let rendered = match cli.format {
                Format::Text => outcome.text,
                Format::Json => {
                    let params = serde_json::to_value(&cli.command).unwrap_or(Value::Null);
                    let elapsed = cli.timings.then(|| start.elapsed().as_secs_f64() * 1e3);
                    output::document(outcome.result, params, elapsed)
                }
            };
            // a closed pipe downstream is not our failure
            let _ = writeln!(std::io::stdout().lock(), "{rendered}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse(_) => ExitCode::from(2),
                _ => ExitCode::from(3),
            }
        }
    }
}

fn run(command: &Command, jobs: usize) -> Result<Outcome> {
    Ok(match command {
        Command::Phi { n, d } => Outcome::int(&quadrics::phi(*n, *d)?),
        Command::PhiPoly { d } => {
            let p = quadrics::phi_polynomial_with_jobs(*d, jobs)?;
            Outcome::new(output::polynomial(&p, "n"), p.display_in("n"))
        }
        Command::Delta { m, n, r } => Outcome::int(&quadrics::delta(*m, *n, *r)?),
        Command::DeltaPoly { m, s } => {
            let p = quadrics::delta_polynomial_with_jobs(*m, *s, jobs)?;
            Outcome::new(output::polynomial(&p, "n"), p.display_in("n"))
        }
        Command::PhiC { n, c, d } => Outcome::int(&quadrics::phi_c(*n, *c, *d)?),
        Command::Product { n, a, b } => {
            let a = a.clone().unwrap_or_else(|| vec![0; n.saturating_sub(1)]);
            Outcome::int(&quadrics::intersection_product(&CQProduct::new(*n, a, b.clone())?)?)
        }
        Command::Pataki { m, n, r } => {
            let inside = quadrics::pataki_nonzero(*m, *n, *r)?;
            Outcome::new(json!(inside), inside.to_string())
        }
        Command::FlagIntegral { n, b } => Outcome::int(&schubert::flag_integral(*n, b)?),
        Command::Monk { i, w } => {
            let product = schubert::monk_multiply(*i, &Permutation::new(w.clone())?)?;
            let terms: Vec<Value> = product
                .terms()
                .iter()
                .map(|(v, c)| json!({ "permutation": v.images(), "coefficient": output::int(c) }))
                .collect();
            let text = product.terms().iter().map(|(v, c)| format!("{c} {v}")).collect::<Vec<_>>().join("\n");
            Outcome::new(Value::Array(terms), text)
        }
        Command::Matroid(cmd) => run_matroid(cmd)?,
        Command::Toric(cmd) => run_toric(cmd)?,
        Command::Cells(args) => run_cells(args)?,
        Command::Segre(cmd) => run_segre(cmd)?,
        Command::HypersurfaceCount { d, n, b } => Outcome::int(&quadrics::hypersurface_characteristic_number(*d, *n, *b)?),
    })
}

fn load_matroid(src: &MatroidSource) -> Result<Matroid> {
    if let Some(path) = &src.graph {
        return Ok(matroid::matroid_from_graph(&Graph::parse(&inputs::read_file(path)?)?));
    }
    if let Some(rn) = &src.uniform {
        let [r, n] = rn[..] else {
            return Err(Error::Parse("--uniform takes \"r,n\"".into()));
        };
        return Matroid::uniform(r, n);
    }
    if let Some(path) = &src.subspace {
        return matroid::matroid_from_subspace(&inputs::parse_matrix(&inputs::read_file(path)?)?);
    }
    if let Some(path) = &src.columns {
        return Matroid::from_columns(&inputs::parse_matrix(&inputs::read_file(path)?)?);
    }
    Err(Error::InvalidInput("no matroid given".into()))
}

fn run_matroid(cmd: &MatroidCommand) -> Result<Outcome> {
    Ok(match cmd {
        MatroidCommand::Charpoly(src) => {
            let m = load_matroid(src)?;
            let chi = matroid::characteristic_polynomial(&m);
            let reduced = matroid::reduced_characteristic_coefficients(&m).ok();
            let mut text = chi.display_in("λ");
            if let Some(nu) = &reduced {
                text.push_str(&format!("\nreduced: {}", join(nu)));
            }
            let result = json!({
                "polynomial": output::polynomial(&chi, "λ"),
                "reduced": reduced.as_deref().map_or(Value::Null, output::ints),
            });
            Outcome::new(result, text)
        }
        MatroidCommand::Reduced(src) => {
            let nu = matroid::reduced_characteristic_coefficients(&load_matroid(src)?)?;
            Outcome::new(output::ints(&nu), join(&nu))
        }
        MatroidCommand::Chromatic { graph } => {
            let p = matroid::chromatic_polynomial(&Graph::parse(&inputs::read_file(graph)?)?);
            Outcome::new(output::polynomial(&p, "q"), p.display_in("q"))
        }
        MatroidCommand::Euler { nu } => Outcome::int(&matroid::euler_characteristic_complement(&Int::unwrap(nu))),
    })
}

fn run_toric(cmd: &ToricCommand) -> Result<Outcome> {
    Ok(match cmd {
        ToricCommand::FanCheck(src) => {
            let fan = src.load()?;
            let result = json!({
                "rank": fan.rank(),
                "rays": fan.rays().len(),
                "maximal_cones": fan.maximal_cones().len(),
                "smooth": true,
                "complete": true,
            });
            let text = format!(
                "smooth complete fan: rank {}, {} rays, {} maximal cones",
                fan.rank(),
                fan.rays().len(),
                fan.maximal_cones().len()
            );
            Outcome::new(result, text)
        }
        ToricCommand::MuGeneric { n, distinguished } => {
            let mu = toric::mu_generic_with_distinguished(*n, *distinguished)?;
            Outcome::new(output::ints(&mu), join(&mu))
        }
        ToricCommand::Integral { source, rays } => {
            let fan = source.load()?;
            let mut class = ToricClass::one(&fan);
            for &r in rays {
                if r == 0 || r > fan.rays().len() {
                    return Err(Error::InvalidInput(format!("ray {r} not in 1..={}", fan.rays().len())));
                }
                class = toric::multiply_by_divisor(&class, &fan.ray_divisor(r - 1))?;
            }
            let v = toric::toric_integral(&class)?;
            Outcome::new(output::rational(&v), v.to_string())
        }
    })
}

fn parse_sigma(s: &str) -> Result<TwoPermutation> {
    s.parse().map_err(|e| match e {
        Error::InvalidInput(msg) => Error::Parse(msg),
        other => other,
    })
}

fn run_cells(args: &CellsArgs) -> Result<Outcome> {
    let listing = |n: usize| {
        let all = cells::enumerate_two_permutations(n);
        let rows: Vec<Value> = all.iter().map(|s| json!({ "sigma": s.to_string(), "weight": cells::weight(s) })).collect();
        let text = all.iter().map(|s| format!("{s} {}", cells::weight(s))).collect::<Vec<_>>().join("\n");
        Outcome::new(Value::Array(rows), text)
    };
    Ok(match (&args.action, args.n) {
        (None, Some(n)) if args.histogram => {
            let hist = cells::chow_group_dimensions(n)?;
            Outcome::new(json!(hist), join(&hist))
        }
        (None, Some(n)) => listing(n),
        (None, None) => return Err(Error::Parse("cells needs --n or a subcommand".into())),
        (Some(CellsCommand::Enumerate { n }), _) => listing(*n),
        (Some(CellsCommand::Weight { sigma }), _) => {
            let w = cells::weight(&parse_sigma(sigma)?);
            Outcome::new(json!(w), w.to_string())
        }
        (Some(CellsCommand::Param { sigma }), _) => {
            let cell = cells::cell_parametrization(&parse_sigma(sigma)?);
            let render = |m: &cells::SymbolicMatrix| -> Vec<Vec<String>> {
                m.iter().map(|row| row.iter().map(ToString::to_string).collect()).collect()
            };
            let (x, y, yt, a, b) = (render(&cell.x), render(&cell.y), render(&cell.y_tilde), render(&cell.a()), render(&cell.b()));
            let mut text = format!("free variables ({}): {}", cell.free_variable_count(), cell.free_variables().join(" "));
            for (name, m) in [("X", &x), ("Y", &y), ("Ytilde", &yt), ("A", &a), ("B", &b)] {
                text.push_str(&format!("\n{name}:"));
                for row in m {
                    text.push_str(&format!("\n  [{}]", row.join(", ")));
                }
            }
            let result = json!({
                "sigma": cell.sigma.to_string(),
                "free_variables": cell.free_variables(),
                "free_variable_count": cell.free_variable_count(),
                "X": x, "Y": y, "Ytilde": yt, "A": a, "B": b,
            });
            Outcome::new(result, text)
        }
        (Some(CellsCommand::Verify { sigma, values, seed }), _) => {
            let sigma = parse_sigma(sigma)?;
            let values: HashMap<String, ExactRational> = match values {
                Some(v) => inputs::assignments(v)?.into_iter().collect(),
                None => random_point(&sigma, *seed),
            };
            let (holds, lambda) = if sigma.n() == 3 {
                cells::verify_cell_point(&sigma, &values)?
            } else {
                cells::verify_generic_point(&sigma, &values)?
            };
            let result = json!({ "holds": holds, "lambda": output::rational(&lambda) });
            Outcome::new(result, format!("{holds} lambda={lambda}"))
        }
    })
}

fn random_point(sigma: &TwoPermutation, seed: u64) -> HashMap<String, ExactRational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    cells::cell_parametrization(sigma)
        .free_variables()
        .into_iter()
        .map(|name| {
            let mut num = 0;
            while num == 0 {
                num = rng.gen_range(-9i64..=9);
            }
            (name, rat_frac(num, rng.gen_range(1i64..=5)))
        })
        .collect()
}

fn run_segre(cmd: &SegreCommand) -> Result<Outcome> {
    let formula = |f: &SegreFormula, eval: fn(&segre::SegreData, i64) -> Result<BigInt>| -> Result<Outcome> {
        let data = inputs::segre_data(&f.data)?;
        data.validate()?;
        match f.i {
            Some(i) => Ok(Outcome::int(&eval(&data, i)?)),
            None => {
                let all = (0..=data.n_l).map(|i| eval(&data, i)).collect::<Result<Vec<_>>>()?;
                Ok(Outcome::new(output::ints(&all), join(&all)))
            }
        }
    };
    Ok(match cmd {
        SegreCommand::Mu(f) => formula(f, segre::mu_from_segre)?,
        SegreCommand::Nu(f) => formula(f, segre::nu_from_segre)?,
        SegreCommand::Correct { mu, n, b, s } => {
            Outcome::int(&segre::nu_from_mu_correction(&mu.0, *n, *b, s)?)
        }
        SegreCommand::Compare { mu, nu } => {
            let ok = segre::mu_nu_inequality_check(&Int::unwrap(mu), &Int::unwrap(nu))?;
            Outcome::new(json!(ok), ok.to_string())
        }
    })
}
