//! Run directories: sample, evolve, track and render from one parameter file.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use bbs_core::measures::{
    estimate_densities, sample_append_mix, sample_bernoulli, sample_hat_mu_len, ComponentLaw,
};
use bbs_core::soliton::identify;
use bbs_core::speeds::{solve_alpha, solve_rho, SpeedTable};
use bbs_core::trajectory::{empirical_speeds, select_tags, track_trajectories, TrajectorySet};
use bbs_core::BallConfig;

use crate::formats::{truncate, write_config, write_speeds, write_trajectories, Params, Sampler};
use crate::raster::{ImageFormat, Raster};
use crate::CliError;

/// Everything a run produces, before it is written out.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub initial: BallConfig,
    pub last: BallConfig,
    pub speeds: SpeedTable,
    pub trajectories: TrajectorySet,
    pub raster: Raster,
    pub format: ImageFormat,
    pub stats: String,
    pub empirical: String,
}

/// Initial configuration for the sampler named in `p`.
pub fn sample(p: &Params) -> Result<BallConfig, CliError> {
    match p.sampler {
        Sampler::Iid => Ok(sample_bernoulli(p.lambda, p.n, p.seed)?),
        Sampler::Append => {
            let rho = p
                .rho
                .as_ref()
                .ok_or_else(|| CliError::Usage("sampler=append needs rho".into()))?;
            Ok(sample_append_mix(
                &truncate(rho, p.k),
                p.n,
                p.mix_steps,
                p.seed,
            )?)
        }
        Sampler::Components => {
            let alpha = p
                .alpha
                .as_ref()
                .ok_or_else(|| CliError::Usage("sampler=components needs alpha".into()))?;
            let law = ComponentLaw::bernoulli(&truncate(alpha, p.k))?;
            Ok(sample_hat_mu_len(&law, p.n, p.seed))
        }
    }
}

/// Speed table from the given densities, or estimated from `initial`.
pub fn speed_table(p: &Params, initial: &BallConfig) -> Result<SpeedTable, CliError> {
    if let Some(rho) = &p.rho {
        return Ok(solve_rho(&truncate(rho, p.k))?);
    }
    if let Some(alpha) = &p.alpha {
        return Ok(solve_alpha(&truncate(alpha, p.k))?);
    }
    let cropped = initial
        .crop_to_records(0, initial.len())
        .unwrap_or_default();
    let d = estimate_densities(&cropped.closed())?;
    Ok(solve_rho(&truncate(&d.rho, p.k))?)
}

fn step_stats(initial: &BallConfig, steps: usize) -> String {
    let mut out = String::from("t\tballs\tsolitons\trecords\tdensity\n");
    let mut c = initial.clone();
    for t in 0..=steps {
        if t > 0 {
            c = c.apply_t();
        }
        let set = identify(&c);
        let window = c.window(0, initial.len().min(c.len()));
        writeln!(
            out,
            "{t}\t{}\t{}\t{}\t{:.6}",
            c.ball_count(),
            set.len(),
            set.records().len(),
            window.density()
        )
        .unwrap();
    }
    out
}

fn empirical_table(speeds: &SpeedTable, traj: &TrajectorySet) -> String {
    let e = empirical_speeds(traj);
    let mut out = String::from("k\tpredicted\tmeasured\tstderr\ttracks\n");
    for k in 1..=speeds.len().max(e.v.len()) {
        let pred = speeds.v.get(k - 1).copied().unwrap_or(f64::NAN);
        match e.v.get(k - 1).copied().flatten() {
            Some(m) => writeln!(
                out,
                "{k}\t{pred:.6}\t{:.6}\t{:.6}\t{}",
                m.mean, m.stderr, m.count
            ),
            None => writeln!(out, "{k}\t{pred:.6}\tNA\tNA\t0"),
        }
        .unwrap();
    }
    match e.v0 {
        Some(m) => writeln!(
            out,
            "0\t{:.6}\t{:.6}\t{:.6}\t{}",
            speeds.v0, m.mean, m.stderr, m.count
        ),
        None => writeln!(out, "0\t{:.6}\tNA\tNA\t0", speeds.v0),
    }
    .unwrap();
    out
}

/// Overlay lines from a few tagged solitons of every size.
fn draw_overlays(raster: &mut Raster, speeds: &SpeedTable, traj: &TrajectorySet) {
    let mut drawn = vec![0usize; speeds.len() + 1];
    for s in &traj.solitons {
        if s.size > speeds.len() || drawn[s.size] >= 3 {
            continue;
        }
        drawn[s.size] += 1;
        raster.slope_line(s.position[0], speeds.v[s.size - 1]);
    }
}

pub fn execute(p: &Params) -> Result<RunOutput, CliError> {
    let format: ImageFormat = p.format.parse().map_err(CliError::Usage)?;
    let initial = sample(p)?;
    let speeds = speed_table(p, &initial)?;
    let margin = initial.len() / 10;
    let tags = select_tags(&initial, p.tags, p.tags, margin);
    let trajectories = track_trajectories(&initial, p.steps, &tags, margin)?;
    let last = initial.apply_t_steps(p.steps);
    let mut raster = Raster::evolve(&initial, p.steps);
    if format == ImageFormat::Pgm {
        draw_overlays(&mut raster, &speeds, &trajectories);
    }
    Ok(RunOutput {
        stats: step_stats(&initial, p.steps),
        empirical: empirical_table(&speeds, &trajectories),
        initial,
        last,
        speeds,
        trajectories,
        raster,
        format,
    })
}

pub fn write_run(dir: &Path, p: &Params, out: &RunOutput) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("params.txt"), p.to_text())?;
    fs::write(dir.join("init.cfg"), write_config(&out.initial))?;
    fs::write(dir.join("final.cfg"), write_config(&out.last))?;
    fs::write(dir.join("speeds.tsv"), write_speeds(&out.speeds))?;
    fs::write(dir.join("empirical.tsv"), &out.empirical)?;
    fs::write(
        dir.join("trajectories.tsv"),
        write_trajectories(&out.trajectories),
    )?;
    fs::write(dir.join("stats.tsv"), &out.stats)?;
    let name = format!("raster.{}", out.format.extension());
    fs::write(dir.join(name), out.raster.render(out.format, p.repeat))?;
    Ok(())
}

pub fn run(dir: &Path, p: &Params) -> Result<RunOutput, CliError> {
    let out = execute(p)?;
    write_run(dir, p, &out)?;
    Ok(out)
}
