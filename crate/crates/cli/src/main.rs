use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Zero;

use omfq::classical::{delta, eisenstein, eta_power, phi_10_1, phi_m2_1};
use omfq::format::{emit, parse, Expansion};
use omfq::gegenbauer::g_eval;
use omfq::jacobi::{dev_coeff, fourier_jacobi, partial_dev_coeff};
use omfq::lattice::{orthogonal_complement, SublatticeSplit};
use omfq::lift::{gritsenko_lattice, gritsenko_lift, theta_lift};
use omfq::ortho::{pullback_cycle, pullback_heegner, ConeRegion};
use omfq::series::parse_rat;
use omfq::verify::{self, Suite};
use omfq::{int, Error, LaurentSeries, Rational, TruncationRegion};

#[derive(Parser)]
#[command(name = "omfq", version, about = "Exact Fourier expansions of orthogonal modular forms and their higher pullbacks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Higher pullback to the Heegner divisor of a vector.
    Pullback {
        #[arg(long)]
        input: PathBuf,
        /// Coordinates of the divisor vector, e.g. "0,0,1".
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        order: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Higher pullback to the special cycle orthogonal to a negative-definite sublattice.
    CyclePullback {
        #[arg(long)]
        input: PathBuf,
        /// Basis of the sublattice, e.g. "0,0,1,0;0,0,0,1".
        #[arg(long)]
        sublattice: String,
        #[arg(long)]
        order: u32,
        /// Arguments of the tensor coefficients, in sublattice coordinates.
        #[arg(long, default_value = "")]
        vectors: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Development coefficient of a Jacobi form.
    Devcoeff {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        order: u32,
        /// Arguments of the tensor coefficients, in index-lattice coordinates.
        #[arg(long, default_value = "")]
        vectors: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Development along the orthogonal complement of a sublattice of the index.
    PartialDevcoeff {
        #[arg(long)]
        input: PathBuf,
        /// Basis of the sublattice that is kept as the new index.
        #[arg(long)]
        sublattice: String,
        #[arg(long)]
        order: u32,
        /// Arguments in the basis of the complement.
        #[arg(long, default_value = "")]
        vectors: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Theta lift of a vector-valued form, or Gritsenko lift of a Jacobi form.
    Lift {
        #[arg(long)]
        input: PathBuf,
        /// Reference vector of the positive cone (defaults to the hyperbolic pair for Jacobi input).
        #[arg(long)]
        w0: Option<String>,
        #[arg(long, default_value = "4")]
        bound: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fourier-Jacobi coefficient of an orthogonal form.
    FourierJacobi {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        index: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classical q-series and index-one Jacobi forms.
    Classical {
        #[arg(long, value_enum)]
        series: ClassicalSeries,
        #[arg(long, default_value_t = 10)]
        prec: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the Gegenbauer polynomial G_N^s(x, y).
    Gegenbauer {
        #[arg(long = "N")]
        n: u32,
        #[arg(long)]
        s: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassicalSeries {
    E4,
    E6,
    Delta,
    Eta,
    #[value(name = "phi-2-1")]
    PhiM21,
    #[value(name = "phi10-1")]
    Phi101,
}

enum Failure {
    Input(Error),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

type Outcome = std::result::Result<(), Failure>;

fn read(path: &PathBuf) -> omfq::Result<Expansion> {
    let text = fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    parse(&text)
}

fn write(out: &Option<PathBuf>, x: &Expansion) -> omfq::Result<()> {
    let text = emit(x);
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Invalid(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_ints(s: &str) -> omfq::Result<Vec<i64>> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| Error::Invalid(format!("not an integer: {t:?}"))))
        .collect()
}

fn parse_int_rows(s: &str) -> omfq::Result<Vec<Vec<i64>>> {
    s.split(';').filter(|r| !r.trim().is_empty()).map(parse_ints).collect()
}

fn parse_vectors(s: &str) -> omfq::Result<Vec<Vec<Rational>>> {
    s.split(';')
        .filter(|r| !r.trim().is_empty())
        .map(|r| r.split(',').map(|t| parse_rat(t.trim())).collect())
        .collect()
}

fn arguments(s: &str, n: u32, dim: usize) -> omfq::Result<Vec<Vec<Rational>>> {
    let vs = parse_vectors(s)?;
    if vs.len() != n as usize || vs.iter().any(|v| v.len() != dim) {
        return Err(Error::Invalid(format!("--vectors needs {n} vectors of length {dim}")));
    }
    Ok(vs)
}

fn expect_kind(x: &Expansion, kind: &str) -> omfq::Result<()> {
    if x.kind() != kind {
        return Err(Error::Invalid(format!("expected a {kind} file, got {}", x.kind())));
    }
    Ok(())
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Pullback { input, lambda, order, out } => {
            let Expansion::Ortho(f) = read(&input)? else { return Err(Error::Invalid("expected an ortho file".into()).into()) };
            let (p, report) = pullback_heegner(&f, &parse_ints(&lambda)?, order)?;
            if !report.omitted.is_empty() {
                eprintln!("{} output coefficients lie beyond the input precision", report.omitted.len());
            }
            write(&out, &Expansion::Ortho(p))?;
        }
        Command::CyclePullback { input, sublattice, order, vectors, out } => {
            let Expansion::Ortho(f) = read(&input)? else { return Err(Error::Invalid("expected an ortho file".into()).into()) };
            let k = parse_int_rows(&sublattice)?;
            let perp = orthogonal_complement(f.lattice(), &k)?;
            let split = SublatticeSplit::new(f.lattice(), perp.complement, k)?;
            let (p, _) = pullback_cycle(&f, &split, order)?;
            let vs = arguments(&vectors, order, p.dim)?;
            write(&out, &Expansion::Ortho(p.evaluate(&vs)?))?;
        }
        Command::Devcoeff { input, order, vectors, out } => {
            let Expansion::Jacobi(phi) = read(&input)? else { return Err(Error::Invalid("expected a jacobi file".into()).into()) };
            let d = dev_coeff(&phi, order)?;
            let coeffs = d.evaluate(&arguments(&vectors, order, phi.index().dim())?)?;
            let den = coeffs.keys().fold(1i64, |acc, q| num_integer::lcm(acc, i64::try_from(q.denom().clone()).unwrap_or(1)));
            let region = TruncationRegion::total_degree(1, phi.bound().clone());
            let terms = coeffs.iter().filter(|(_, c)| !c.is_zero()).map(|(q, c)| {
                let e = (q * int(den)).to_integer();
                (vec![i64::try_from(e).expect("small exponent")], c.clone())
            });
            let series = LaurentSeries::from_terms(1, den, region, terms)?;
            write(&out, &Expansion::Series { weight: phi.weight() + int(order as i64), series })?;
        }
        Command::PartialDevcoeff { input, sublattice, order, vectors, out } => {
            let Expansion::Jacobi(phi) = read(&input)? else { return Err(Error::Invalid("expected a jacobi file".into()).into()) };
            let d = partial_dev_coeff(&phi, &parse_int_rows(&sublattice)?, order)?;
            let vs = arguments(&vectors, order, d.dim)?;
            write(&out, &Expansion::Jacobi(d.evaluate(&vs)?))?;
        }
        Command::Lift { input, w0, bound, out } => {
            let bound = parse_rat(&bound)?;
            let x = read(&input)?;
            let lifted = match &x {
                Expansion::Vvmf(f) => {
                    let w0 = w0.ok_or_else(|| Error::Invalid("--w0 is required for vvmf input".into()))?;
                    let w0: Vec<Rational> = parse_vectors(&w0)?.concat();
                    theta_lift(f, &ConeRegion::new(w0, bound))?
                }
                Expansion::Jacobi(phi) => {
                    let dim = gritsenko_lattice(phi.index())?.dim();
                    let w0 = match w0 {
                        Some(w) => parse_vectors(&w)?.concat(),
                        None => (0..dim).map(|i| if i < 2 { int(1) } else { int(0) }).collect(),
                    };
                    gritsenko_lift(phi, &ConeRegion::new(w0, bound))?
                }
                _ => return Err(Error::Invalid("expected a vvmf or jacobi file".into()).into()),
            };
            write(&out, &Expansion::Ortho(lifted))?;
        }
        Command::FourierJacobi { input, index, out } => {
            let x = read(&input)?;
            expect_kind(&x, "ortho")?;
            let Expansion::Ortho(f) = x else { unreachable!() };
            let found = fourier_jacobi(&f)?.into_iter().find(|(m, _)| *m == index);
            let Some((_, phi)) = found else {
                return Err(Error::Invalid(format!("no Fourier-Jacobi coefficient of index {index} within the truncation")).into());
            };
            write(&out, &Expansion::Jacobi(phi))?;
        }
        Command::Classical { series, prec, out } => {
            let x = match series {
                ClassicalSeries::E4 => Expansion::Series { weight: int(4), series: eisenstein(4, prec)? },
                ClassicalSeries::E6 => Expansion::Series { weight: int(6), series: eisenstein(6, prec)? },
                ClassicalSeries::Delta => Expansion::Series { weight: int(12), series: delta(prec) },
                ClassicalSeries::Eta => Expansion::Series { weight: omfq::rat(1, 2), series: eta_power(prec, 1) },
                ClassicalSeries::PhiM21 => Expansion::Jacobi(phi_m2_1(prec)?),
                ClassicalSeries::Phi101 => Expansion::Jacobi(phi_10_1(prec)?),
            };
            write(&out, &x)?;
        }
        Command::Gegenbauer { n, s, x, y } => {
            println!("{}", omfq::series::fmt_rat(&g_eval(n, &parse_rat(&s)?, &parse_rat(&x)?, &parse_rat(&y)?)));
        }
        Command::Verify { suite } => {
            let suites = if suite == "all" {
                Suite::ALL.to_vec()
            } else {
                vec![Suite::from_name(&suite).ok_or_else(|| Error::Invalid(format!("unknown suite {suite:?}")))?]
            };
            let mut ok = true;
            for s in suites {
                let report = verify::run(s)?;
                println!("{report}");
                ok &= report.is_ok();
            }
            if !ok {
                return Err(Failure::Verify);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
