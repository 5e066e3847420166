//! Renders a preset as a config file, parses it back, runs a shortened
//! version and lists what was written.
//!
//! cargo run --release --example config_files -- [preset] [out_dir]

use carbuncle::experiments::preset;
use carbuncle::io::{parse_config, render_config, write_runs, Config};

fn main() -> carbuncle::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let name = args.get(1).map_or("plane-shock", String::as_str);
    let dir = args.get(2).cloned().unwrap_or_else(|| format!("out/example-{name}"));
    let (run, sweep) = preset(name)?;
    let text = render_config(&Config::new(run, sweep, dir));
    print!("{text}");
    let mut cfg = parse_config(&text)?;
    cfg.run.max_steps = Some(50);
    for f in write_runs(&cfg)? {
        println!("{}: {} steps", f.dir.display(), f.summary.steps);
        for (file, sum) in &f.checksums {
            println!("  {file} {}", &sum[..16]);
        }
    }
    Ok(())
}
