use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fglab::report::{self, parse_pairs, render_law, RunConfig, Suites};
use fglab::{Error, Result};

#[derive(Parser)]
#[command(name = "fglab", about = "Formal group laws over unramified p-adic rings")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the law and print it.
    Construct,
    /// Torsion fields: degrees, counts, generation, breaks, mu_p.
    Torsion,
    /// Endomorphism subfield and tau.
    Endo,
    /// Block matrices and commutants.
    Matrices,
    /// Every suite.
    Verify,
}

#[derive(Args)]
struct Opts {
    /// key = value file; flags override it.
    #[arg(long, global = true)]
    config: Option<String>,
    #[arg(long, global = true)]
    p: Option<String>,
    #[arg(long, global = true)]
    f: Option<String>,
    #[arg(long = "N", global = true)]
    n: Option<String>,
    /// multiplicative | lubin_tate | honda | custom | corpus
    #[arg(long, global = true)]
    group: Option<String>,
    /// Functional-equation parameters, comma separated.
    #[arg(long, global = true)]
    u: Option<String>,
    #[arg(long, global = true)]
    d: Option<String>,
    /// File with the integer coefficients of [p] (custom group).
    #[arg(long, global = true)]
    coeffs: Option<String>,
    #[arg(long, global = true)]
    nmax: Option<String>,
    #[arg(long, global = true)]
    dcap: Option<String>,
    #[arg(long, global = true)]
    jobs: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Where to write the JSON report.
    #[arg(long, global = true)]
    out: Option<String>,
}

impl Opts {
    fn config(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{path}: {e}")))?;
            cfg.apply(&parse_pairs(&text)?)?;
        }
        let flags = [
            ("p", &self.p),
            ("f", &self.f),
            ("N", &self.n),
            ("group", &self.group),
            ("u", &self.u),
            ("d", &self.d),
            ("coeffs", &self.coeffs),
            ("nmax", &self.nmax),
            ("dcap", &self.dcap),
            ("jobs", &self.jobs),
            ("seed", &self.seed),
            ("out", &self.out),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                cfg.set(k, v)?;
            }
        }
        Ok(cfg)
    }
}

fn write_out(cfg: &RunConfig, json: &str) -> Result<()> {
    if let Some(path) = &cfg.out {
        fs::write(path, json).map_err(|e| Error::Config(format!("{path}: {e}")))?;
    }
    Ok(())
}

fn construct(cfg: &RunConfig) -> Result<bool> {
    let mut records = Vec::new();
    for (name, spec) in cfg.groups()? {
        let law = spec.law(cfg.n, 12)?;
        println!("{name}: F = {}", render_law(&law, 4));
        records.push(serde_json::json!({"name": name, "spec": spec, "law": law.record()}));
    }
    write_out(cfg, &serde_json::to_string_pretty(&records).expect("serializable"))?;
    Ok(true)
}

fn suites(cfg: &RunConfig, s: Suites) -> Result<bool> {
    let r = report::run(cfg, s)?;
    print!("{}", r.render());
    write_out(cfg, &serde_json::to_string_pretty(&r).expect("serializable"))?;
    Ok(r.all_pass())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = cli.opts.config().and_then(|cfg| match cli.cmd {
        Cmd::Construct => construct(&cfg),
        Cmd::Torsion => suites(&cfg, Suites::TORSION),
        Cmd::Endo => suites(&cfg, Suites::ENDO),
        Cmd::Matrices => suites(&cfg, Suites::MATRICES),
        Cmd::Verify => suites(&cfg, Suites::ALL),
    });
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
