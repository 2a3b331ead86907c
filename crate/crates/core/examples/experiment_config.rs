//! Config files, experiment runs and budget sweeps from library code. The
//! `holderopt` binary wraps the same calls:
//!
//! ```text
//! holderopt run --config crates/core/examples/configs/quadratic.cfg
//! holderopt sweep --config crates/core/examples/configs/quadratic.cfg --budgets 32,64,128,256
//! holderopt suite strongly_convex_rates
//! ```
use std::path::Path;

use holderopt::experiment::{format_trace_csv, parse_config, run_experiment, run_sweep};

fn main() -> holderopt::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/configs");
    let out = std::env::temp_dir().join("holderopt-example");
    for name in ["quadratic.cfg", "strongly_convex.cfg", "online.cfg"] {
        let mut cfg = parse_config(&dir.join(name))?;
        // keep the example from writing into the source tree
        cfg.output.trace_path = cfg.output.trace_path.map(|p| out.join(p.file_name().unwrap()));
        cfg.output.summary_path = cfg.output.summary_path.map(|p| out.join(p.file_name().unwrap()));
        let res = run_experiment(&cfg)?;
        let s = &res.summary;
        println!(
            "{name}: {} queries={} final_subopt={:?} fit={:?}",
            s.algorithm, s.total_queries, s.final_subopt, s.fit.as_ref().map(|f| (f.kind, f.value))
        );
        let csv = format_trace_csv(&res.trace);
        for line in csv.lines().take(3) {
            println!("    {line}");
        }
        if name == "quadratic.cfg" {
            let sweep = run_sweep(&cfg, &[32, 64, 128, 256, 512, 1024], None)?;
            println!("  sweep slope {:?}", sweep.slope);
        }
    }
    println!("outputs in {}", out.display());
    Ok(())
}
