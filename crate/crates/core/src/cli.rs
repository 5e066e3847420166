//! Command-line front end: `run`, `preset`, `riemann`, `polar`.

use std::io::{Read, Write};
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::experiments::{preset, PRESETS};
use crate::gas::{wedge_shock_angles, GasModel, Primitive};
use crate::io::{fmt_f64, parse_config, render_config, write_runs, Config};
use crate::riemann::{solve_star, Wave};

pub const USAGE: &str = "usage:
  carbuncle run <config|-> [--out DIR]
  carbuncle preset <name>
  carbuncle riemann <rhoL> <unL> <utL> <rhoR> <unR> <utR>
  carbuncle polar <M> <alpha_deg>
presets: plane-shock filament-standard filament-similarity wedge-nuq mach-sweep refine-study";

fn num(s: &str, what: &str) -> Result<f64> {
    s.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::Usage(format!("{what}: expected a number, got `{s}`")))
}

fn wave_text(w: &Wave, rho_side: f64, rho_star: f64) -> String {
    let strength = fmt_f64(rho_star / rho_side - 1.0);
    match *w {
        Wave::Shock { speed } => format!("shock speed={} strength={strength}", fmt_f64(speed)),
        Wave::Rarefaction { head, tail } => {
            format!("rarefaction head={} tail={} strength={strength}", fmt_f64(head), fmt_f64(tail))
        }
    }
}

fn cmd_run(args: &[String], stdin: &mut dyn Read, out: &mut dyn Write) -> Result<()> {
    let mut src = None;
    let mut out_dir = None;
    let mut it = args.iter();
    while let Some(a) = it.next() {
        match a.as_str() {
            "--out" => {
                out_dir = Some(PathBuf::from(
                    it.next().ok_or_else(|| Error::Usage("--out needs a directory".into()))?,
                ))
            }
            _ if src.is_none() => src = Some(a.clone()),
            _ => return Err(Error::Usage(format!("unexpected argument `{a}`"))),
        }
    }
    let src = src.ok_or_else(|| Error::Usage("run needs a config path or `-`".into()))?;
    let text = if src == "-" {
        let mut s = String::new();
        stdin.read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(&src).map_err(|e| Error::Io(format!("{src}: {e}")))?
    };
    let mut cfg: Config = parse_config(&text)?;
    if let Some(d) = out_dir {
        cfg.out_dir = d;
    }
    for f in write_runs(&cfg)? {
        writeln!(
            out,
            "{}: {} steps, t = {}, {} files",
            f.dir.display(),
            f.summary.steps,
            fmt_f64(f.summary.final_time),
            f.checksums.len() + 1
        )?;
    }
    Ok(())
}

fn cmd_preset(args: &[String], out: &mut dyn Write) -> Result<()> {
    let [name] = args else {
        return Err(Error::Usage(format!("preset needs one name: {}", PRESETS.join(" "))));
    };
    let (run, sweep) = preset(name)?;
    let cfg = Config::new(run, sweep, format!("out/{name}"));
    write!(out, "# preset {name}\n{}", render_config(&cfg))?;
    Ok(())
}

fn cmd_riemann(args: &[String], out: &mut dyn Write) -> Result<()> {
    if args.len() != 6 {
        return Err(Error::Usage("riemann needs rhoL unL utL rhoR unR utR".into()));
    }
    let v: Vec<f64> = args.iter().map(|a| num(a, "riemann")).collect::<Result<_>>()?;
    let gas = GasModel::default();
    let l = Primitive::new(v[0], v[1], v[2]);
    let r = Primitive::new(v[3], v[4], v[5]);
    let fan = solve_star(&l, &r, [1.0, 0.0], &gas)?;
    writeln!(out, "rho_star = {}", fmt_f64(fan.rho_star))?;
    writeln!(out, "u_star = {}", fmt_f64(fan.u_star))?;
    writeln!(out, "p_star = {}", fmt_f64(fan.p_star()))?;
    writeln!(out, "left_wave = {}", wave_text(&fan.left_wave, l.rho, fan.rho_star))?;
    writeln!(out, "contact_speed = {}", fmt_f64(fan.contact_speed))?;
    writeln!(out, "right_wave = {}", wave_text(&fan.right_wave, r.rho, fan.rho_star))?;
    Ok(())
}

fn cmd_polar(args: &[String], out: &mut dyn Write) -> Result<()> {
    if args.len() != 2 {
        return Err(Error::Usage("polar needs <M> <alpha_deg>".into()));
    }
    let mach = num(&args[0], "M")?;
    let alpha_deg = num(&args[1], "alpha_deg")?;
    let gas = GasModel::default();
    let c = gas.sound_speed(1.0)?;
    let up = Primitive::new(1.0, mach * c, 0.0);
    let sol = wedge_shock_angles(alpha_deg.to_radians(), &up, &gas)?;
    let state = |p: &Primitive| -> Result<String> {
        Ok(format!(
            "rho={} ux={} uy={} mach={}",
            fmt_f64(p.rho),
            fmt_f64(p.ux),
            fmt_f64(p.uy),
            fmt_f64(p.mach(&gas)?)
        ))
    };
    writeln!(out, "sigma_weak = {}", fmt_f64(sol.sigma_weak))?;
    writeln!(out, "sigma_weak_deg = {}", fmt_f64(sol.sigma_weak.to_degrees()))?;
    writeln!(out, "sigma_strong = {}", fmt_f64(sol.sigma_strong))?;
    writeln!(out, "sigma_strong_deg = {}", fmt_f64(sol.sigma_strong.to_degrees()))?;
    writeln!(out, "downstream_weak = {}", state(&sol.downstream_weak)?)?;
    writeln!(out, "downstream_strong = {}", state(&sol.downstream_strong)?)?;
    Ok(())
}

/// Runs the command line `args` (program name excluded) and returns the exit
/// status. Results go to `out`, diagnostics to `err`.
pub fn run(args: &[String], stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let Some((cmd, rest)) = args.split_first() else {
        let _ = writeln!(err, "{USAGE}");
        return 2;
    };
    let result = match cmd.as_str() {
        "run" => cmd_run(rest, stdin, out),
        "preset" => cmd_preset(rest, out),
        "riemann" => cmd_riemann(rest, out),
        "polar" => cmd_polar(rest, out),
        "-h" | "--help" | "help" => {
            let _ = writeln!(out, "{USAGE}");
            Ok(())
        }
        other => Err(Error::Usage(format!("unknown command `{other}`"))),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "carbuncle: {e}");
            if matches!(e, Error::Usage(_)) {
                let _ = writeln!(err, "{USAGE}");
                2
            } else {
                1
            }
        }
    }
}
