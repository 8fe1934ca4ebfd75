//! Runs every suite over the corpus and writes the JSON report.
use fglab::report::{run, parse_pairs, RunConfig, Suites};

fn main() -> fglab::Result<()> {
    let mut cfg = RunConfig::default();
    cfg.apply(&parse_pairs("group = corpus\nN = 3\nnmax = 2\nseed = 1")?)?;
    let r = run(&cfg, Suites::ALL)?;
    print!("{}", r.render());
    let path = std::env::temp_dir().join("fglab_report.json");
    std::fs::write(&path, r.to_json_stable()).map_err(|e| fglab::Error::Config(e.to_string()))?;
    println!("report written to {}", path.display());
    Ok(())
}
