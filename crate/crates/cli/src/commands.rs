use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use freqvqa::media::{load_image_sequence, read_y4m, FrameSequence, SamplingPlan};
use freqvqa::metrics::{join_scores, plcc, read_score_csv, srcc};
use freqvqa::pooling::DenseFeatureMap;
use freqvqa::predictor::{predict_video, ModelBundle, Prediction};
use freqvqa::prior::{grid_to_csv, grid_to_pgm, weight_maps_for_plan, BlockGrid, FrameCache, PriorConfig};
use freqvqa::tensor::{read_bundle_file, read_tensor_file};
use freqvqa::GRID_SIZE;
use serde::Serialize;

use crate::failure::{require_file, Failure};
use crate::{BenchArgs, EvalArgs, Format, InspectArgs, MapArgs, Sampling, ScoreArgs};

/// Reads a `.y4m` file, or treats anything else as an image glob.
fn load_input(input: &str) -> Result<FrameSequence, Failure> {
    let is_y4m = Path::new(input)
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("y4m"));
    Ok(if is_y4m { read_y4m(input)? } else { load_image_sequence(input)? })
}

fn plan_for(seq: &FrameSequence, s: Sampling) -> Result<SamplingPlan, Failure> {
    Ok(SamplingPlan::new(seq.frame_count(), s.frames as usize, s.window as usize)?)
}

fn load_model(path: &Path) -> Result<ModelBundle, Failure> {
    require_file(path)?;
    ModelBundle::load(path).map_err(|e| Failure::at(path, e))
}

fn load_features(path: &Path, model: &ModelBundle, samples: usize) -> Result<Vec<DenseFeatureMap>, Failure> {
    require_file(path)?;
    let tensor = read_tensor_file(path).map_err(|e| Failure::at(path, e))?;
    let expected = [samples, model.channels, GRID_SIZE, GRID_SIZE];
    if tensor.shape() != expected {
        return Err(Failure::usage(format!(
            "{}: feature shape {:?} does not match expected {:?}",
            path.display(),
            tensor.shape(),
            expected
        )));
    }
    DenseFeatureMap::split_frames(&tensor).map_err(|e| Failure::at(path, e))
}

/// Decode, plan, load and score in one timed unit.
fn score_once(input: &str, features: &Path, model: &Path, s: Sampling) -> Result<(FrameSequence, Prediction), Failure> {
    let seq = load_input(input)?;
    let plan = plan_for(&seq, s)?;
    let model = load_model(model)?;
    let feats = load_features(features, &model, plan.samples())?;
    let p = predict_video(&seq, &feats, &model, &plan, &PriorConfig::default())?;
    Ok((seq, p))
}

#[derive(Serialize)]
struct ScoreReport {
    score: f64,
    q_art: f64,
    q_str: f64,
    q_raw: f64,
    alpha: f64,
    beta: f64,
    gamma: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<f64>,
}

pub fn score(args: &ScoreArgs, format: Format) -> Result<String, Failure> {
    let start = Instant::now();
    let (_, p) = score_once(&args.input, &args.features, &args.model, args.sampling)?;
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let report = ScoreReport {
        score: p.score,
        q_art: p.q_art,
        q_str: p.q_str,
        q_raw: p.q_raw,
        alpha: p.alpha,
        beta: p.beta,
        gamma: p.gamma,
        timing_ms: (!args.no_timing).then_some(elapsed),
    };
    Ok(match format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut header = "score,q_art,q_str,q_raw,alpha,beta,gamma".to_string();
            let mut row = format!(
                "{},{},{},{},{},{},{}",
                p.score, p.q_art, p.q_str, p.q_raw, p.alpha, p.beta, p.gamma
            );
            if let Some(t) = report.timing_ms {
                header.push_str(",timing_ms");
                write!(row, ",{t}").unwrap();
            }
            format!("{header}\n{row}\n")
        }
    })
}

#[derive(Serialize)]
struct MapFiles {
    pgm: String,
    csv: String,
}

#[derive(Serialize)]
struct MapEntry {
    sample: usize,
    frame: usize,
    artifact: MapFiles,
    structure: MapFiles,
}

#[derive(Serialize)]
struct MapIndex {
    out_dir: String,
    frames: Vec<MapEntry>,
}

fn write_map(dir: &Path, stem: &str, grid: &BlockGrid) -> Result<MapFiles, Failure> {
    let pgm = dir.join(format!("{stem}.pgm"));
    let csv = dir.join(format!("{stem}.csv"));
    fs::write(&pgm, grid_to_pgm(grid)).map_err(|e| Failure::io(&pgm, e))?;
    fs::write(&csv, grid_to_csv(grid)).map_err(|e| Failure::io(&csv, e))?;
    Ok(MapFiles {
        pgm: display(&pgm),
        csv: display(&csv),
    })
}

pub fn weight_maps(args: &MapArgs, format: Format) -> Result<String, Failure> {
    let seq = load_input(&args.input)?;
    let plan = plan_for(&seq, args.sampling)?;
    let cache = FrameCache::build(&plan, |i| seq.analysis_frame(i));
    let maps = weight_maps_for_plan(&cache, &plan, &PriorConfig::default())?;
    fs::create_dir_all(&args.out_dir).map_err(|e| Failure::io(&args.out_dir, e))?;
    let mut frames = Vec::with_capacity(maps.len());
    for (k, (m, &frame)) in maps.iter().zip(&plan.sampled).enumerate() {
        frames.push(MapEntry {
            sample: k,
            frame,
            artifact: write_map(&args.out_dir, &format!("w_art_{k:02}"), &m.artifact)?,
            structure: write_map(&args.out_dir, &format!("w_str_{k:02}"), &m.structure)?,
        });
    }
    Ok(match format {
        Format::Json => to_json(&MapIndex {
            out_dir: display(&args.out_dir),
            frames,
        }),
        Format::Csv => {
            let mut out = String::from("sample,frame,map,pgm,csv\n");
            for e in &frames {
                for (name, files) in [("artifact", &e.artifact), ("structure", &e.structure)] {
                    writeln!(out, "{},{},{name},{},{}", e.sample, e.frame, files.pgm, files.csv).unwrap();
                }
            }
            out
        }
    })
}

#[derive(Serialize)]
struct EvalReport {
    srcc: f64,
    plcc: f64,
    n: usize,
}

pub fn eval(args: &EvalArgs, format: Format) -> Result<String, Failure> {
    require_file(&args.predictions)?;
    require_file(&args.ground_truth)?;
    let pred = read_score_csv(&args.predictions)?;
    let gt = read_score_csv(&args.ground_truth)?;
    let (p, g) = join_scores(&pred, &gt)?;
    let report = EvalReport {
        srcc: srcc(&p, &g)?,
        plcc: plcc(&p, &g)?,
        n: p.len(),
    };
    Ok(match format {
        Format::Json => to_json(&report),
        Format::Csv => format!("srcc,plcc,n\n{},{},{}\n", report.srcc, report.plcc, report.n),
    })
}

#[derive(Serialize)]
struct BenchRow {
    input: String,
    width: usize,
    height: usize,
    frames: usize,
    runs: u32,
    mean_ms: f64,
    stddev_ms: f64,
}

/// Checks a bench input exists before any timing starts. Globs are left
/// to the loader.
fn require_input(input: &str) -> Result<(), Failure> {
    if input.contains(['*', '?', '[']) {
        Ok(())
    } else {
        require_file(Path::new(input))
    }
}

pub fn bench(args: &BenchArgs, format: Format) -> Result<String, Failure> {
    if args.features.len() != 1 && args.features.len() != args.input.len() {
        return Err(Failure::usage(format!(
            "{} feature files for {} inputs; pass one shared file or one per input",
            args.features.len(),
            args.input.len()
        )));
    }
    for input in &args.input {
        require_input(input)?;
    }
    for f in &args.features {
        require_file(f)?;
    }
    require_file(&args.model)?;

    let mut rows = Vec::with_capacity(args.input.len());
    for (i, input) in args.input.iter().enumerate() {
        let features: &PathBuf = args.features.get(i).unwrap_or(&args.features[0]);
        let mut times = Vec::with_capacity(args.runs as usize);
        let mut dims = (0, 0, 0);
        for _ in 0..args.runs {
            let start = Instant::now();
            let (seq, _) = score_once(input, features, &args.model, args.sampling)?;
            times.push(start.elapsed().as_secs_f64() * 1e3);
            dims = (seq.width(), seq.height(), seq.frame_count());
        }
        let n = times.len() as f64;
        let mean = times.iter().sum::<f64>() / n;
        let var = times.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / n;
        rows.push(BenchRow {
            input: input.clone(),
            width: dims.0,
            height: dims.1,
            frames: dims.2,
            runs: args.runs,
            mean_ms: mean,
            stddev_ms: var.sqrt(),
        });
    }
    Ok(match format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut out = String::from("input,width,height,frames,runs,mean_ms,stddev_ms\n");
            for r in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{:.3},{:.3}",
                    r.input, r.width, r.height, r.frames, r.runs, r.mean_ms, r.stddev_ms
                )
                .unwrap();
            }
            out
        }
    })
}

#[derive(Serialize)]
struct EntryInfo {
    name: String,
    shape: Vec<usize>,
}

pub fn inspect_model(args: &InspectArgs, format: Format) -> Result<String, Failure> {
    require_file(&args.model)?;
    let bundle = read_bundle_file(&args.model).map_err(|e| Failure::at(&args.model, e))?;
    let entries: Vec<EntryInfo> = bundle
        .entries()
        .iter()
        .map(|(name, t)| EntryInfo {
            name: name.clone(),
            shape: t.shape().to_vec(),
        })
        .collect();
    Ok(match format {
        Format::Json => to_json(&entries),
        Format::Csv => {
            let mut out = String::from("name,shape\n");
            for e in &entries {
                let dims: Vec<String> = e.shape.iter().map(usize::to_string).collect();
                writeln!(out, "{},{}", e.name, dims.join("x")).unwrap();
            }
            out
        }
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn display(path: &Path) -> String {
    path.display().to_string()
}
