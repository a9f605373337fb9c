use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use colortrack::config::{self, parse_color};
use colortrack::control::{closed_loop_tf, design_gains, discretize, LoopSpec, PlantModel};
use colortrack::harness::{
    self, bench_segmentation, fmt_sig6, illumination_sweep, multi_object, run_scenario, Motion,
    Scenario, ScenarioKind,
};
use colortrack::imaging::Frame;
use colortrack::plant::CameraPose;
use colortrack::pnm;
use colortrack::region::{locate, RegionDescriptor, ScanParams};
use colortrack::segmentation::{pick, segment, threshold_from_pick, PickMargins, SegmentMode};

#[derive(Parser)]
#[command(name = "colortrack", version, about = "Color object segmentation, location and pan-tilt tracking simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Design PI gains for a first-order plant from settling time and overshoot.
    Design(DesignArgs),
    /// Segment an image and locate the first object.
    Segment(SegmentArgs),
    /// Run a scenario file and write the trajectory and metrics.
    Track(TrackArgs),
    /// Circular object motion with tracking disabled; reports radius statistics.
    Clock(ClockArgs),
    /// Compare RGB-box and chromaticity segmentation across illumination levels.
    Sweep(ScenarioArgs),
    /// Render one frame of a scenario to a PPM or raw RGB565 file.
    Render(RenderArgs),
    /// Measure segmentation throughput of both color spaces.
    Bench(BenchArgs),
}

#[derive(Args)]
struct DesignArgs {
    /// Plant gain.
    #[arg(long)]
    k: f64,
    /// Plant time constant, seconds.
    #[arg(long)]
    tau: f64,
    /// Settling time, seconds.
    #[arg(long)]
    ts: f64,
    /// Percent overshoot.
    #[arg(long)]
    po: f64,
    /// Sampling period for the discrete coefficients, seconds.
    #[arg(long, default_value_t = 1.0 / harness::DEFAULT_FPS)]
    sample_period: f64,
    /// Also write the design as a CSV row.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct SegmentArgs {
    /// Input image: binary PPM, or headerless little-endian RGB565 (`.rgb565`).
    input: PathBuf,
    #[arg(long)]
    width: Option<usize>,
    #[arg(long)]
    height: Option<usize>,
    /// Picked color r,g,b.
    #[arg(long, conflicts_with = "pick_xy")]
    pick: Option<String>,
    /// Pick the color of this pixel, x,y.
    #[arg(long)]
    pick_xy: Option<String>,
    #[arg(long, default_value = "chroma")]
    mode: String,
    #[arg(long, default_value_t = PickMargins::default().rgb)]
    rgb_margin: u8,
    #[arg(long, default_value_t = PickMargins::default().chroma)]
    chroma_margin: f64,
    #[arg(long, default_value_t = PickMargins::default().i_min)]
    i_min: u16,
    #[arg(long, default_value_t = ScanParams::default().min_width)]
    min_width: usize,
    /// Report pixel count and centroid of the component.
    #[arg(long)]
    fill: bool,
    /// Write the mask as PBM.
    #[arg(long)]
    mask: Option<PathBuf>,
    /// Write the mask as raw little-endian 32-bit words.
    #[arg(long)]
    words: Option<PathBuf>,
    /// Write the region as a CSV row.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a setting, `key=value`; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Write the trajectory (or sweep table) as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write the metrics report.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct TrackArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Print the recognized configuration keys and exit.
    #[arg(long)]
    list_keys: bool,
}

#[derive(Args)]
struct ClockArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Seconds per revolution.
    #[arg(long)]
    period: Option<f64>,
    /// Path radius in pixels.
    #[arg(long)]
    radius_px: Option<f64>,
    /// Number of revolutions to simulate.
    #[arg(long, default_value_t = 2.0)]
    revolutions: f64,
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Output file; `.rgb565` writes raw words, anything else PPM.
    #[arg(long, short)]
    out: PathBuf,
    /// Scenario time of the frame, seconds.
    #[arg(long, default_value_t = 0.0)]
    time: f64,
    #[arg(long)]
    pan: Option<f64>,
    #[arg(long)]
    tilt: Option<f64>,
    /// Also write the segmentation mask as PBM.
    #[arg(long)]
    mask: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[arg(long, default_value_t = 50)]
    iterations: usize,
}

fn load_scenario(args: &ScenarioArgs, default: ScenarioKind) -> Result<Scenario> {
    let mut s = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            config::parse_scenario(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => Scenario::preset(default),
    };
    config::apply_overrides(&mut s, args.overrides.iter().map(String::as_str))?;
    Ok(s)
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn parse_pair(v: &str) -> Result<(usize, usize)> {
    let (a, b) = v.split_once(',').context("expected x,y")?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

fn design(a: &DesignArgs) -> Result<()> {
    let plant = PlantModel::new(a.k, a.tau)?;
    let spec = LoopSpec::new(a.ts, a.po)?;
    let (g, d) = design_gains(&plant, &spec)?;
    let c = discretize(&g, a.sample_period)?;
    let tf = closed_loop_tf(&plant, &g);
    let [p1, p2] = d.poles;
    println!("kp: {}", fmt_sig6(g.kp));
    println!("ki: {}", fmt_sig6(g.ki));
    println!("xi: {}", fmt_sig6(d.xi));
    println!("wn: {}", fmt_sig6(d.wn));
    println!("pole1: {} {:+}j", fmt_sig6(p1.re), fmt_sig6(p1.im));
    println!("pole2: {} {:+}j", fmt_sig6(p2.re), fmt_sig6(p2.im));
    println!("dc_gain: {}", fmt_sig6(tf.dc_gain()));
    println!("sample_period: {}", fmt_sig6(a.sample_period));
    println!("c0: {}", fmt_sig6(c.c0));
    println!("c1: {}", fmt_sig6(c.c1));
    if let Some(path) = &a.csv {
        let row = [a.k, a.tau, a.ts, a.po, g.kp, g.ki, d.xi, d.wn, p1.re, p1.im, p2.re, p2.im, c.c0, c.c1]
            .map(fmt_sig6)
            .join(",");
        write_text(path, &format!("k,tau,ts,po,kp,ki,xi,wn,p1_re,p1_im,p2_re,p2_im,c0,c1\n{row}\n"))?;
    }
    Ok(())
}

fn read_frame(path: &Path, width: Option<usize>, height: Option<usize>) -> Result<Frame> {
    if path.extension().is_some_and(|e| e == "rgb565") {
        let (Some(w), Some(h)) = (width, height) else {
            bail!("raw RGB565 input needs --width and --height");
        };
        Ok(Frame::read_rgb565(path, w, h)?)
    } else {
        Ok(pnm::read_ppm(path)?)
    }
}

fn segment_cmd(a: &SegmentArgs) -> Result<()> {
    let frame = read_frame(&a.input, a.width, a.height)?;
    let color = match (&a.pick, &a.pick_xy) {
        (Some(c), _) => parse_color(c)?,
        (None, Some(xy)) => {
            let (x, y) = parse_pair(xy)?;
            if x >= frame.width() || y >= frame.height() {
                bail!("pick pixel ({x}, {y}) is outside the {}x{} image", frame.width(), frame.height());
            }
            pick(&frame, x, y)
        }
        (None, None) => bail!("one of --pick or --pick-xy is required"),
    };
    let mode: SegmentMode = a.mode.parse()?;
    let margins = PickMargins { rgb: a.rgb_margin, chroma: a.chroma_margin, i_min: a.i_min };
    let t = threshold_from_pick(color, mode, margins)?;
    let mask = segment(&frame, &t);
    let scan = ScanParams { min_width: a.min_width.max(1), fill_count: a.fill, ..ScanParams::default() };
    if let Some(p) = &a.mask {
        pnm::write_pbm(&mask, p)?;
    }
    if let Some(p) = &a.words {
        fs::write(p, mask.to_le_bytes()).with_context(|| format!("writing {}", p.display()))?;
    }
    println!("pixels set: {} of {}", mask.count_ones(), frame.width() * frame.height());
    match locate(&mask, &scan) {
        Some(r) => {
            println!("{r}");
            if let Some(p) = &a.csv {
                write_text(p, &format!("{}\n{}\n", RegionDescriptor::CSV_HEADER, r.csv_row()))?;
            }
        }
        None => {
            println!("no region found");
            if let Some(p) = &a.csv {
                write_text(p, &format!("{}\n", RegionDescriptor::CSV_HEADER))?;
            }
        }
    }
    Ok(())
}

fn sweep_table(s: &Scenario) -> Result<String> {
    let levels = illumination_sweep(s)?;
    let mut out = String::from("level,chroma_pixels,rgb_pixels,chroma_retained,rgb_retained\n");
    for l in levels {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt_sig6(l.level),
            l.chroma_pixels,
            l.rgb_pixels,
            fmt_sig6(l.chroma_retained),
            fmt_sig6(l.rgb_retained)
        );
    }
    Ok(out)
}

fn multi_table(s: &Scenario) -> Result<String> {
    let mut out = String::from("object,pick,bbox,center,inside\n");
    for r in multi_object(s)? {
        let center = r.center.map_or("none".to_string(), |(x, y)| format!("{x} {y}"));
        let _ = writeln!(
            out,
            "{},{} {} {},{} {} {} {},{},{}",
            r.index, r.pick.r, r.pick.g, r.pick.b, r.bbox.0, r.bbox.1, r.bbox.2, r.bbox.3, center, r.inside
        );
    }
    Ok(out)
}

fn run_tracking(s: &Scenario, args: &ScenarioArgs) -> Result<()> {
    let (rec, metrics) = run_scenario(s)?;
    if let Some(p) = &args.csv {
        harness::write_csv(&rec, p)?;
    }
    if let Some(p) = &args.report {
        harness::write_report(&metrics, p)?;
    }
    print!("scenario: {}\nframes: {}\n{}", s.kind.name(), rec.rows.len(), metrics.report());
    Ok(())
}

fn track(a: &TrackArgs) -> Result<()> {
    if a.list_keys {
        for (k, d) in config::KEYS {
            println!("{k:<18} {d}");
        }
        return Ok(());
    }
    let s = load_scenario(&a.scenario, ScenarioKind::StepTrack)?;
    let table = match s.kind {
        ScenarioKind::IlluminationSweep => sweep_table(&s)?,
        ScenarioKind::MultiObject => multi_table(&s)?,
        _ => return run_tracking(&s, &a.scenario),
    };
    print!("{table}");
    if let Some(p) = a.scenario.csv.as_ref().or(a.scenario.report.as_ref()) {
        write_text(p, &table)?;
    }
    Ok(())
}

fn clock(a: &ClockArgs) -> Result<()> {
    let mut s = load_scenario(&a.scenario, ScenarioKind::ClockMotion)?;
    if let Motion::Circular { period, radius, .. } = &mut s.motion {
        if let Some(p) = a.period {
            *period = p;
        }
        if let Some(r) = a.radius_px {
            *radius = r / s.intrinsics.ppd_x;
        }
        if !a.scenario.overrides.iter().any(|o| o.trim_start().starts_with("duration")) {
            s.duration = a.revolutions * *period;
        }
    } else {
        bail!("clock needs circular motion");
    }
    run_tracking(&s, &a.scenario)
}

fn sweep(a: &ScenarioArgs) -> Result<()> {
    let s = load_scenario(a, ScenarioKind::IlluminationSweep)?;
    let table = sweep_table(&s)?;
    print!("{table}");
    if let Some(p) = &a.csv {
        write_text(p, &table)?;
    }
    Ok(())
}

fn render_cmd(a: &RenderArgs) -> Result<()> {
    let s = load_scenario(&a.scenario, ScenarioKind::SegmentOnly)?;
    s.validate()?;
    let pose = CameraPose::new(a.pan.unwrap_or(s.initial_pose.pan), a.tilt.unwrap_or(s.initial_pose.tilt));
    let frame = s.frame_at(a.time, pose);
    if a.out.extension().is_some_and(|e| e == "rgb565") {
        frame.write_rgb565(&a.out)?;
    } else {
        pnm::write_ppm(&frame, &a.out)?;
    }
    if let Some(p) = &a.mask {
        pnm::write_pbm(&segment(&frame, &s.threshold()?), p)?;
    }
    println!("wrote {}x{} frame to {}", frame.width(), frame.height(), a.out.display());
    Ok(())
}

fn bench(a: &BenchArgs) -> Result<()> {
    let s = load_scenario(&a.scenario, ScenarioKind::SegmentOnly)?;
    s.validate()?;
    let frame = s.frame_at(0.0, s.initial_pose);
    let b = bench_segmentation(&frame, s.picked_color(), s.margins, a.iterations)?;
    let text = format!(
        "frame: {}x{}\niterations: {}\nrgb_pixels_per_s: {}\nchroma_pixels_per_s: {}\nrgb_qvga_fps: {}\nchroma_qvga_fps: {}\noracle_match: {}\n",
        frame.width(),
        frame.height(),
        b.iterations,
        fmt_sig6(b.rgb_pixels_per_sec),
        fmt_sig6(b.chroma_pixels_per_sec),
        fmt_sig6(b.rgb_qvga_fps),
        fmt_sig6(b.chroma_qvga_fps),
        b.oracle_match
    );
    print!("{text}");
    if let Some(p) = &a.scenario.report {
        write_text(p, &text)?;
    }
    if !b.oracle_match {
        bail!("packed segmentation disagrees with the reference");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Design(a) => design(a),
        Command::Segment(a) => segment_cmd(a),
        Command::Track(a) => track(a),
        Command::Clock(a) => clock(a),
        Command::Sweep(a) => sweep(a),
        Command::Render(a) => render_cmd(a),
        Command::Bench(a) => bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
