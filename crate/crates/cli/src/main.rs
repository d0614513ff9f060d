use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use dp6_core::cohomology::{
    self, enumerate_subgroups, etale_shape, lattice_h1, lattice_invariants,
};
use dp6_core::hexagon::IntersectionForm;
use dp6_core::par::Execution;
use dp6_core::schema::{SurfaceInput, SurfaceReport};
use dp6_core::verify::{all_criteria, VerifyOptions};

/// Invariants of degree-6 del Pezzo surfaces.
#[derive(Debug, Parser)]
#[command(name = "dp6", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the subgroups of S₂ × S₃ with their étale shapes and cohomology.
    Subgroups {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the eight verification suites.
    Verify {
        /// Denominator bound for the enumerations (1, 2, 3 or 6).
        #[arg(long, default_value_t = 6)]
        bound: u32,
        /// Enumerate models with up to this many places.
        #[arg(long, default_value_t = 3)]
        max_places: usize,
        /// Run the enumerations on one thread.
        #[arg(long)]
        sequential: bool,
        /// JSON file holding a 4×4 Gram matrix to use instead of the standard form.
        #[arg(long)]
        intersection_form: Option<PathBuf>,
    },
    /// Classify the surface data in a JSON file and reduce the algebras in it.
    Surface {
        #[arg(long)]
        input: PathBuf,
        /// Only report the algebra with this name.
        #[arg(long)]
        algebra_d: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

/// Exit status for a completed run whose checks failed.
const CHECK_FAILURE: u8 = 1;
/// Exit status for unusable input.
const INPUT_ERROR: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Subgroups { format } => {
            subgroups(format);
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            bound,
            max_places,
            sequential,
            intersection_form,
        } => verify(bound, max_places, sequential, intersection_form.as_deref()),
        Command::Surface {
            input,
            algebra_d,
            format,
        } => surface(&input, algebra_d.as_deref(), format),
    };
    outcome.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::from(INPUT_ERROR)
    })
}

fn subgroups(format: Format) {
    let rows: Vec<serde_json::Value> = enumerate_subgroups()
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let shape = etale_shape(g);
            let pic_rank = lattice_invariants(&cohomology::picard_lattice(g)).cols();
            let h1 = |m: cohomology::GLattice| lattice_h1(&m).to_string();
            json!({
                "id": i,
                "order": g.order(),
                "elements": g.to_string(),
                "shape": shape.to_string(),
                "pic_rank": pic_rank,
                "h1": {
                    "Z[KL/F]": h1(cohomology::lines_lattice(g)),
                    "Z[K/F]": h1(cohomology::triangles_lattice(g)),
                    "Z[L/F]": h1(cohomology::pairs_lattice(g)),
                    "T": h1(cohomology::character_lattice(g)),
                    "Pic": h1(cohomology::picard_lattice(g)),
                },
            })
        })
        .collect();
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&rows).expect("serializable")
        ),
        Format::Text => {
            println!(
                "{:<3} {:<6} {:<21} {:<9} {:<11} {:<10} {:<10} {:<10} {:<7} elements",
                "id",
                "order",
                "shape",
                "Pic rank",
                "H¹ Z[KL/F]",
                "H¹ Z[K/F]",
                "H¹ Z[L/F]",
                "H¹ T̂",
                "H¹ Pic"
            );
            for r in &rows {
                let h = &r["h1"];
                println!(
                    "{:<3} {:<6} {:<21} {:<9} {:<11} {:<10} {:<10} {:<10} {:<7} {}",
                    r["id"].to_string(),
                    r["order"].to_string(),
                    r["shape"].as_str().unwrap_or_default(),
                    r["pic_rank"].to_string(),
                    h["Z[KL/F]"].as_str().unwrap_or_default(),
                    h["Z[K/F]"].as_str().unwrap_or_default(),
                    h["Z[L/F]"].as_str().unwrap_or_default(),
                    h["T"].as_str().unwrap_or_default(),
                    h["Pic"].as_str().unwrap_or_default(),
                    r["elements"].as_str().unwrap_or_default(),
                );
            }
        }
    }
}

fn read_form(path: &Path) -> anyhow::Result<IntersectionForm> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let gram: [[i64; 4]; 4] = serde_json::from_str(&text)
        .with_context(|| format!("{} is not a 4×4 integer matrix", path.display()))?;
    if (0..4).any(|i| (0..4).any(|j| gram[i][j] != gram[j][i])) {
        bail!("{} is not symmetric", path.display());
    }
    Ok(IntersectionForm::from_gram(gram))
}

fn verify(
    bound: u32,
    max_places: usize,
    sequential: bool,
    form: Option<&Path>,
) -> anyhow::Result<ExitCode> {
    if !(1..=3).contains(&max_places) {
        bail!("--max-places must be 1, 2 or 3");
    }
    let form = form.map(read_form).transpose()?.unwrap_or_default();
    let execution = if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let opts = VerifyOptions {
        bound,
        max_places,
        execution,
        form,
    };
    let criteria = all_criteria(&opts)?;
    for c in &criteria {
        let status = if c.report.all_passed() {
            "PASS"
        } else {
            "FAIL"
        };
        println!("criterion {} [{status}] {}", c.number, c.title);
        for check in &c.report.checks {
            println!("  {check}");
        }
    }
    let first_failure = criteria
        .iter()
        .flat_map(|c| c.report.failures())
        .next()
        .map(|c| c.name.clone());
    match first_failure {
        None => {
            println!("all checks passed");
            Ok(ExitCode::SUCCESS)
        }
        Some(first) => {
            eprintln!("first failing check: {first}");
            Ok(ExitCode::from(CHECK_FAILURE))
        }
    }
}

fn surface(path: &Path, only: Option<&str>, format: Format) -> anyhow::Result<ExitCode> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let input = SurfaceInput::from_json(&text)
        .with_context(|| format!("{} does not match the schema", path.display()))?;
    let report = SurfaceReport::compute(&input, only)?;
    match format {
        Format::Text => print!("{report}"),
        Format::Json => println!("{}", report.to_json()),
    }
    if report.valid {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!(
            "error: invalid surface data: {}",
            report.violations.join("; ")
        );
        Ok(ExitCode::from(INPUT_ERROR))
    }
}
