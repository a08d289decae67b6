use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dw_core::pachner::random_move_sequence;
use dw_core::statesum::StateSumError;
use dw_core::{
    fixtures, invariant, make_orderable, BranchingError, Cochain2, Cochain3, FiniteGroup, Triangulation,
    TriangulationError, DEFAULT_MAX_MOVES,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "dwinv", version, about = "Dijkgraaf-Witten state-sum invariants of triangulated 3-manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the invariant of a triangulation.
    Compute {
        /// Gluing table (JSON).
        #[arg(long)]
        triangulation: PathBuf,
        /// `Zm` for the cyclic group of order m, or `table:FILE`.
        #[arg(long)]
        group: String,
        /// `gen:p` for the p-th power of the cyclic generator, or `file:FILE`.
        #[arg(long)]
        cocycle: String,
        #[arg(long, env = "DW_MAX_MOVES", default_value_t = DEFAULT_MAX_MOVES)]
        max_moves: usize,
        /// Print a JSON record instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Run a property suite over the bundled fixtures.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, env = "DW_MAX_MOVES", default_value_t = DEFAULT_MAX_MOVES)]
        max_moves: usize,
    },
    /// Find a branching, applying positive 2-3 moves if needed.
    Order {
        #[arg(long)]
        triangulation: PathBuf,
        #[arg(long, env = "DW_MAX_MOVES", default_value_t = DEFAULT_MAX_MOVES)]
        max_moves: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Moves,
    Cohomology,
    Mirror,
    Oracle,
}

/// A failure with its process exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn parse(message: impl fmt::Display) -> Failure {
        Failure { code: 2, message: message.to_string() }
    }

    fn mismatch(message: impl fmt::Display) -> Failure {
        Failure { code: 1, message: message.to_string() }
    }
}

impl From<StateSumError> for Failure {
    fn from(e: StateSumError) -> Failure {
        let code = match e {
            StateSumError::SearchExhausted { .. } => 4,
            _ => 3,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<BranchingError> for Failure {
    fn from(e: BranchingError) -> Failure {
        Failure::from(StateSumError::from(e))
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))
}

fn load_triangulation(path: &Path) -> Result<Triangulation, Failure> {
    match Triangulation::from_json(&read(path)?) {
        Ok(t) => Ok(t),
        Err(TriangulationError::NonOrientable) => {
            Err(Failure { code: 3, message: format!("{}: triangulation is not orientable", path.display()) })
        }
        Err(e) => Err(Failure::parse(format!("{}: {e}", path.display()))),
    }
}

/// The group and, when it is `Z_m`, its order m.
fn parse_group(arg: &str) -> Result<(FiniteGroup, Option<usize>), Failure> {
    if let Some(file) = arg.strip_prefix("table:") {
        let g = FiniteGroup::from_json(&read(Path::new(file))?).map_err(|e| Failure::parse(format!("{file}: {e}")))?;
        return Ok((g, None));
    }
    let m = arg
        .strip_prefix(['Z', 'z'])
        .and_then(|m| m.parse::<usize>().ok())
        .filter(|&m| m >= 1)
        .ok_or_else(|| Failure::parse(format!("group must be Zm or table:FILE, got {arg:?}")))?;
    Ok((FiniteGroup::cyclic(m), Some(m)))
}

fn parse_cocycle(arg: &str, cyclic_order: Option<usize>) -> Result<Cochain3, Failure> {
    if let Some(p) = arg.strip_prefix("gen:") {
        let p: i64 = p.parse().map_err(|_| Failure::parse(format!("generator power must be an integer, got {p:?}")))?;
        let m = cyclic_order.ok_or_else(|| Failure::parse("gen:p needs a cyclic group Zm"))?;
        return Ok(Cochain3::cyclic_generator(m, p));
    }
    if let Some(file) = arg.strip_prefix("file:") {
        return Cochain3::from_json(&read(Path::new(file))?).map_err(|e| Failure::parse(format!("{file}: {e}")));
    }
    Err(Failure::parse(format!("cocycle must be gen:p or file:FILE, got {arg:?}")))
}

fn compute(triangulation: &Path, group: &str, cocycle: &str, max_moves: usize, json: bool) -> Result<(), Failure> {
    let t = load_triangulation(triangulation)?;
    let (g, m) = parse_group(group)?;
    let alpha = parse_cocycle(cocycle, m)?;
    let r = invariant(&t, &g, &alpha, max_moves)?;
    if json {
        let record = serde_json::json!({
            "exact": r.value.to_json_value(),
            "approx": r.value.approx_string(),
            "moves_used": r.moves.len(),
            "colorings": r.colorings,
        });
        println!("{record}");
    } else {
        println!("exact: {}", r.value);
        println!("approx: {}", r.value.approx_string());
        println!("moves used: {}", r.moves.len());
        println!("colorings: {}", r.colorings);
    }
    Ok(())
}

fn order(triangulation: &Path, max_moves: usize) -> Result<(), Failure> {
    let t = load_triangulation(triangulation)?;
    let o = make_orderable(&t, max_moves)?;
    let tri = &o.triangulation;
    println!("moves: {}", o.moves.len());
    for mv in &o.moves {
        println!("  {mv}");
    }
    println!("tetrahedra: {}", tri.tet_count());
    println!("edge directions:");
    for (c, class) in tri.edge_classes().iter().enumerate() {
        let rep = class.representative();
        let (a, b) = dw_core::perm::EDGE_VERTICES[rep.edge];
        let (_, rel) = tri.edge_class_of(rep.tet, rep.edge);
        let (from, to) = if rel * o.branching.edge_orientation()[c] > 0 { (a, b) } else { (b, a) };
        println!("  edge class {c}: tetrahedron {}, vertex {from} -> vertex {to}", rep.tet);
    }
    println!("vertex orders:");
    for s in 0..tri.tet_count() {
        let [v0, v1, v2, v3] = o.branching.order(s);
        println!("  tetrahedron {s}: {v0} < {v1} < {v2} < {v3}, sign {:+}", o.branching.sign(s));
    }
    Ok(())
}

/// Cyclic group order each bundled fixture is checked over.
fn fixture_group_order(name: &str) -> usize {
    match name {
        "m009" | "m010" | "s3_double" => 3,
        "s778" | "s788" => 12,
        _ => 5,
    }
}

fn verify(suite: Suite, seed: u64, max_moves: usize) -> Result<(), Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = 0usize;
    let name = match suite {
        Suite::Moves => "moves",
        Suite::Cohomology => "cohomology",
        Suite::Mirror => "mirror",
        Suite::Oracle => "oracle",
    };
    let fixtures: Vec<(&str, Triangulation)> = match suite {
        Suite::Oracle => fixtures::CENSUS_NAMES.iter().map(|&n| (n, fixtures::census(n).unwrap())).collect(),
        _ => fixtures::all(),
    };
    for (fixture, t) in fixtures {
        let m = fixture_group_order(fixture);
        let g = FiniteGroup::cyclic(m);
        let generator = Cochain3::cyclic_generator(m, 1);
        let z = |t: &Triangulation, alpha: &Cochain3| invariant(t, &g, alpha, max_moves).map(|r| r.value);
        match suite {
            Suite::Moves => {
                let reference = z(&t, &generator)?;
                for _ in 0..20 {
                    let s: u64 = rng.gen();
                    let (u, moves) = random_move_sequence(&t, 6, s);
                    let value = z(&u, &generator)?;
                    cases += 1;
                    if value != reference {
                        let moves: Vec<String> = moves.iter().map(|m| m.to_string()).collect();
                        return Err(Failure::mismatch(format!(
                            "moves: {fixture} over Z{m}: {} after [{}], {} before",
                            value.approx_string(),
                            moves.join("; "),
                            reference.approx_string()
                        )));
                    }
                }
            }
            Suite::Cohomology => {
                let reference = z(&t, &generator)?;
                for i in 0..10 {
                    let beta = Cochain2::random_normalized(&g, generator.modulus(), &mut rng);
                    let twisted = generator.product_same_modulus(&beta.coboundary(&g)).expect("same modulus");
                    let value = z(&t, &twisted)?;
                    cases += 1;
                    if value != reference {
                        return Err(Failure::mismatch(format!(
                            "cohomology: {fixture} over Z{m}, coboundary #{i}: {} vs {}",
                            value.approx_string(),
                            reference.approx_string()
                        )));
                    }
                }
            }
            Suite::Mirror => {
                let mirror = t.mirror();
                for p in 0..m as i64 {
                    let alpha = Cochain3::cyclic_generator(m, p);
                    let (a, b) = (z(&t, &alpha)?, z(&mirror, &alpha)?);
                    cases += 1;
                    if b != a.conjugate() {
                        return Err(Failure::mismatch(format!(
                            "mirror: {fixture} over Z{m}, p={p}: {} is not the conjugate of {}",
                            b.approx_string(),
                            a.approx_string()
                        )));
                    }
                }
            }
            Suite::Oracle => {
                let formula = fixtures::reduced_formula(fixture).expect("every census fixture has a formula");
                for p in 0..m as i64 {
                    let alpha = Cochain3::cyclic_generator(m, p);
                    let (a, b) = (z(&t, &alpha)?, formula.evaluate(&g, &alpha));
                    cases += 1;
                    if a != b {
                        return Err(Failure::mismatch(format!(
                            "oracle: {fixture} over Z{m}, p={p}: state sum {}, reduced formula {}",
                            a.approx_string(),
                            b.approx_string()
                        )));
                    }
                }
            }
        }
    }
    println!("{name}: pass ({cases} cases, seed {seed})");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Compute { triangulation, group, cocycle, max_moves, json } => {
            compute(triangulation, group, cocycle, *max_moves, *json)
        }
        Command::Verify { suite, seed, max_moves } => verify(*suite, *seed, *max_moves),
        Command::Order { triangulation, max_moves } => order(triangulation, *max_moves),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
