use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ovp_cli::{run, ClaimFilter, Command, Format, RunConfig};
use ovp_core::harness::Category;
use ovp_core::HarnessConfig;

#[derive(Parser)]
#[command(name = "ovp", version, about = "q-series expansion and congruence checks for (j,k)-regular overpartitions")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "text")]
    format: OutFormat,
    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Expand an eta-quotient such as "f1^-2*f2" to a given order.
    Expand {
        #[arg(long)]
        eta: String,
        #[arg(long, default_value_t = 50)]
        order: usize,
        #[arg(long)]
        modulus: Option<u64>,
    },
    /// Check the q-series identity database.
    VerifyIdentities {
        #[arg(long)]
        id: Option<String>,
        /// Overrides each identity's default order.
        #[arg(long)]
        order: Option<usize>,
    },
    /// Check congruence claims from the catalog.
    VerifyClaims {
        /// Glob over claim ids.
        #[arg(long)]
        id: Option<String>,
        #[arg(long)]
        category: Option<String>,
        #[arg(long)]
        n_max: Option<u64>,
        #[arg(long, default_value_t = 1)]
        alpha_max: u32,
        #[arg(long, default_value_t = 1)]
        beta_max: u32,
        #[arg(long, default_value_t = 1)]
        gamma_max: u32,
        #[arg(long, value_delimiter = ',', default_value = "5,7,11,13")]
        primes: Vec<u64>,
        #[arg(long, default_value_t = 200_000)]
        budget: u64,
        /// Fail with exit 4 instead of shortening windows that exceed the budget.
        #[arg(long)]
        no_shrink: bool,
        /// A TOML catalog to use instead of the built-in one.
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Compare generating-function coefficients with direct enumeration.
    OracleCompare {
        /// e.g. "4,8"
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 40)]
        n_max: u64,
    },
    /// List identities and claims.
    List,
    /// Identities, enumeration agreement and the intermediate congruences.
    Core,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.format {
        OutFormat::Text => Format::Text,
        OutFormat::Json => Format::Structured,
    };
    let command = match cli.command.unwrap_or(Cmd::Core) {
        Cmd::Expand { eta, order, modulus } => Command::Expand { eta, order, modulus },
        Cmd::VerifyIdentities { id, order } => Command::VerifyIdentities { id, order },
        Cmd::VerifyClaims {
            id,
            category,
            n_max,
            alpha_max,
            beta_max,
            gamma_max,
            primes,
            budget,
            no_shrink,
            catalog,
        } => {
            let category = match category.map(|c| c.parse::<Category>()).transpose() {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(ovp_cli::EXIT_USAGE as u8);
                }
            };
            let harness = HarnessConfig {
                budget,
                alpha_max,
                beta_max,
                gamma_max,
                primes,
                shrink_to_budget: !no_shrink,
                n_max_override: n_max,
                ..HarnessConfig::default()
            };
            Command::VerifyClaims { filter: ClaimFilter { id, category }, harness, catalog }
        }
        Cmd::OracleCompare { spec, n_max } => Command::OracleCompare { spec, n_max },
        Cmd::List => Command::List,
        Cmd::Core => Command::Core,
    };
    let code = run(&RunConfig { command, format }, &mut io::stdout().lock());
    ExitCode::from(code as u8)
}
