use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use motion_alphabet::bench::{run_bench, BenchConfig};
use motion_alphabet::codec::{
    decode_sentence, encode, reference_times, read_rotations, read_sentence, read_trajectory, sample_parametric,
    write_sentence, write_trajectory, write_words, Alphabet, TrajectorySpec,
};
use motion_alphabet::crystal::{wallpaper, WallpaperKind};
use motion_alphabet::decode::{
    decode_batch_bruteforce, decode_batch_cover, decode_batch_wedge, RotationAlphabet, RotationMethod,
    WedgeAlphabet, DEFAULT_COVER_PROBES, REFERENCE_CONJUGATION,
};
use motion_alphabet::domains::{build_cover, build_wedge, CosetDomain, CoverSet, DoubleCosetDomain};
use motion_alphabet::export::{coset_cell_mesh, double_coset_cell_mesh, se2_prism_mesh, wedge_mesh};
use motion_alphabet::groups::{canonical_axis_angle, named_group, FiniteRotationGroup};
use motion_alphabet::lie::{exp_so3, Rotation, Se2Metric};
use motion_alphabet::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "motion-alphabet", version, about = "Quantize rotations and rigid motions into finite alphabets")]
struct Cli {
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Parser, Debug, Clone)]
struct GroupArgs {
    /// Left group H: trivial, tetra, octa, icosa, icosa-std, C<q>, optionally with -conj.
    #[arg(long = "H", default_value = "icosa")]
    h: String,
    /// Right group K, same names as H.
    #[arg(long = "K", default_value = "icosa-conj")]
    k: String,
    /// Conjugating rotation as an axis-angle vector `x,y,z`.
    #[arg(long, value_delimiter = ',', num_args = 3, allow_negative_numbers = true)]
    g: Option<Vec<f64>>,
}

impl GroupArgs {
    fn g_vector(&self) -> [f64; 3] {
        match &self.g {
            Some(v) => [v[0], v[1], v[2]],
            None => REFERENCE_CONJUGATION,
        }
    }

    fn g_rotation(&self) -> Rotation {
        exp_so3(&self.g_vector().into())
    }

    fn groups(&self) -> Result<(FiniteRotationGroup, FiniteRotationGroup)> {
        let g = self.g_rotation();
        Ok((named_group(&self.h, Some(&g))?, named_group(&self.k, Some(&g))?))
    }

    fn uses_conjugation(&self) -> bool {
        self.h.ends_with("-conj") || self.k.ends_with("-conj")
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Obj,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum DomainKind {
    Coset,
    DoubleCoset,
    Wedge,
    Cover,
    Se2,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Brute,
    Cover,
    Wedge,
}

impl From<Method> for RotationMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Brute => RotationMethod::Brute,
            Method::Cover => RotationMethod::Cover,
            Method::Wedge => RotationMethod::Wedge,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the elements of a finite rotation group.
    Groups {
        #[arg(long = "H", default_value = "icosa")]
        h: String,
        #[arg(long, value_delimiter = ',', num_args = 3, allow_negative_numbers = true)]
        g: Option<Vec<f64>>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Build the cover set for two-stage decoding and print its size.
    Cover {
        #[command(flatten)]
        groups: GroupArgs,
        /// Probe samples.
        #[arg(long, default_value_t = DEFAULT_COVER_PROBES)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the cover as JSON.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Encode a trajectory into a sentence.
    Encode {
        /// p4xC<q> (q odd) or P432xI.
        #[arg(long, default_value = "p4xC5")]
        alphabet: String,
        /// Built-in trajectory (reference-se2).
        #[arg(long)]
        builtin: Option<String>,
        /// Sample index range `a..b` for the built-in trajectory, times π(1 + 2k/5).
        #[arg(long, default_value = "-2..2", allow_hyphen_values = true)]
        k: String,
        /// Trajectory JSON lines.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Decode rotations into words, or a sentence back into poses.
    Decode {
        #[arg(long, value_enum, default_value = "cover")]
        method: Method,
        #[command(flatten)]
        groups: GroupArgs,
        /// Precomputed cover JSON (otherwise built on the fly).
        #[arg(long)]
        cover: Option<PathBuf>,
        /// With an alphabet, the input is a sentence and the output its representative poses.
        #[arg(long)]
        alphabet: Option<String>,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Export fundamental domains as OBJ meshes or JSON descriptors.
    Export {
        #[arg(long, value_enum, default_value = "coset")]
        domain: DomainKind,
        #[command(flatten)]
        groups: GroupArgs,
        /// Wallpaper group for the se2 domain.
        #[arg(long, default_value = "p4")]
        wallpaper: String,
        /// Mesh resolution (latitude bands or triangle subdivisions).
        #[arg(long, default_value_t = 24)]
        resolution: usize,
        #[arg(long, value_enum, default_value = "obj")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_COVER_PROBES)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Time brute-force, cover and wedge decoding on seeded random rotations.
    Bench {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, value_delimiter = ',', default_values = ["brute", "cover", "wedge"])]
        methods: Vec<Method>,
        /// Probe samples for the cover.
        #[arg(long, default_value_t = DEFAULT_COVER_PROBES)]
        probes: usize,
        #[arg(long)]
        cover: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn open_input(path: &Option<PathBuf>) -> Result<Box<dyn BufRead>> {
    Ok(match path {
        Some(p) => Box::new(BufReader::new(File::open(p)?)),
        None => Box::new(BufReader::new(io::stdin().lock())),
    })
}

fn parse_range(s: &str) -> Result<std::ops::RangeInclusive<i64>> {
    let bad = || Error::Validation(format!("expected a range `a..b`, got `{s}`"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    Ok(a.trim().parse().map_err(|_| bad())?..=b.trim().parse().map_err(|_| bad())?)
}

fn rotation_alphabet(groups: &GroupArgs, cover: &Option<PathBuf>, probes: usize, seed: u64) -> Result<RotationAlphabet> {
    let (h, k) = groups.groups()?;
    let domain = DoubleCosetDomain::new(h, k)?;
    let mut set = match cover {
        Some(p) => CoverSet::load(p)?,
        None => build_cover(&domain, probes, seed)?,
    };
    if cover.is_none() && groups.uses_conjugation() {
        set.g = Some(groups.g_vector());
    }
    RotationAlphabet::new(domain, set)
}

fn run(cli: Cli) -> Result<()> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Error::Validation(e.to_string()))?;
    }
    match cli.command {
        Command::Groups { h, g, format, output } => {
            let g = g.map(|v| exp_so3(&[v[0], v[1], v[2]].into())).unwrap_or_else(|| exp_so3(&REFERENCE_CONJUGATION.into()));
            let group = named_group(&h, Some(&g))?;
            let mut out = open_output(&output)?;
            match format {
                Some(Format::Json) => writeln!(out, "{}", serde_json::to_string_pretty(&group.to_json())?)?,
                Some(Format::Obj) => return Err(Error::Validation("groups supports --format json only".into())),
                None => {
                    writeln!(out, "{} (order {})", group.name(), group.len())?;
                    for (i, r) in group.elements().iter().enumerate() {
                        let (angle, axis) = canonical_axis_angle(r);
                        writeln!(
                            out,
                            "{i:3}  angle {:8.3} deg  axis ({:+.6}, {:+.6}, {:+.6})",
                            angle.to_degrees(),
                            axis.x,
                            axis.y,
                            axis.z
                        )?;
                    }
                }
            }
            out.flush()?;
        }
        Command::Cover { groups, n, seed, output } => {
            let alphabet = rotation_alphabet(&groups, &None, n, seed)?;
            let cover = alphabet.cover();
            if let Some(p) = output {
                cover.save(p)?;
            }
            println!("{}", cover.len());
            eprintln!(
                "cover of {} x {} from {} probe samples (seed {}): {} of {} shifted domains",
                cover.h,
                cover.k,
                n,
                seed,
                cover.len(),
                alphabet.word_count()
            );
        }
        Command::Encode {
            alphabet,
            builtin,
            k,
            input,
            output,
            seed,
        } => {
            let alphabet = Alphabet::from_id(&alphabet, DEFAULT_COVER_PROBES, seed)?;
            let samples = match builtin {
                Some(name) => {
                    if input.is_some() {
                        return Err(Error::Validation("give either --builtin or --input".into()));
                    }
                    let spec: TrajectorySpec = name.parse()?;
                    sample_parametric(&spec, &reference_times(parse_range(&k)?))?
                }
                None => read_trajectory(open_input(&input)?)?,
            };
            let sentence = encode(&samples, &alphabet)?;
            match output {
                Some(p) => {
                    write_sentence(BufWriter::new(File::create(p)?), &sentence)?;
                    println!("{sentence}");
                }
                None => println!("{sentence}"),
            }
        }
        Command::Decode {
            method,
            groups,
            cover,
            alphabet,
            input,
            output,
            seed,
        } => {
            let mut out = open_output(&output)?;
            if let Some(id) = alphabet {
                let alphabet = Alphabet::from_id(&id, DEFAULT_COVER_PROBES, seed)?;
                let sentence = read_sentence(open_input(&input)?, &alphabet.id())?;
                write_trajectory(&mut out, &decode_sentence(&sentence, &alphabet)?)?;
            } else {
                let rs = read_rotations(open_input(&input)?)?;
                let decoded = match method {
                    Method::Wedge => {
                        let (h, _) = groups.groups()?;
                        decode_batch_wedge(&WedgeAlphabet::new(&h)?, &rs).0
                    }
                    Method::Brute => {
                        // brute force never reads the cover; one probe keeps setup cheap
                        let a = rotation_alphabet(&groups, &cover, 1, seed)?;
                        decode_batch_bruteforce(&a, &rs).0
                    }
                    Method::Cover => {
                        let a = rotation_alphabet(&groups, &cover, DEFAULT_COVER_PROBES, seed)?;
                        decode_batch_cover(&a, &rs)?.0
                    }
                };
                write_words(&mut out, &decoded)?;
            }
            out.flush()?;
        }
        Command::Export {
            domain,
            groups,
            wallpaper: kind,
            resolution,
            format,
            output,
            n,
            seed,
        } => {
            let mut out = open_output(&output)?;
            let (h, k) = groups.groups()?;
            match (domain, format) {
                (DomainKind::Coset, Format::Obj) => coset_cell_mesh(&CosetDomain::new(h), resolution).write_obj(&mut out)?,
                (DomainKind::Coset, Format::Json) => writeln!(out, "{}", serde_json::to_string_pretty(&h.to_json())?)?,
                (DomainKind::DoubleCoset, Format::Obj) => {
                    double_coset_cell_mesh(&DoubleCosetDomain::new(h, k)?, resolution).write_obj(&mut out)?
                }
                (DomainKind::Wedge, Format::Obj) => wedge_mesh(&build_wedge(&h)?, resolution).write_obj(&mut out)?,
                (DomainKind::Wedge, Format::Json) => {
                    writeln!(out, "{}", serde_json::to_string_pretty(&build_wedge(&h)?.to_file())?)?
                }
                (DomainKind::Cover, Format::Json) => {
                    let a = rotation_alphabet(&groups, &None, n, seed)?;
                    writeln!(out, "{}", a.cover().to_json_string()?)?
                }
                (DomainKind::Se2, f) => {
                    let kind: WallpaperKind = kind.parse()?;
                    let d = wallpaper(kind, 1.0)?.voronoi_domain(Se2Metric::default());
                    match f {
                        Format::Obj => se2_prism_mesh(&d).write_obj(&mut out)?,
                        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&d.to_json())?)?,
                    }
                }
                (d, f) => {
                    return Err(Error::Validation(format!("no {f:?} export for the {d:?} domain")));
                }
            }
            out.flush()?;
        }
        Command::Bench {
            n,
            seed,
            methods,
            probes,
            cover,
            output,
        } => {
            let groups = GroupArgs {
                h: "icosa".into(),
                k: "icosa-conj".into(),
                g: None,
            };
            let rot = rotation_alphabet(&groups, &cover, probes, seed)?;
            let wedge = WedgeAlphabet::icosahedral()?;
            let config = BenchConfig {
                samples: n,
                seed,
                methods: methods.into_iter().map(RotationMethod::from).collect(),
                threads: cli.threads,
            };
            let report = run_bench(&config, &rot, &wedge)?;
            let mut out = open_output(&output)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            out.flush()?;
            for m in &report.methods {
                eprintln!(
                    "{:>6}: {:8.2} evals/call  {:9.3} us/call (+/- {:.3})  eval speedup {:6.2}  wall speedup {:6.2}",
                    format!("{:?}", m.method).to_lowercase(),
                    m.distance_evaluations_per_call,
                    m.mean_per_call * 1e6,
                    m.std_per_call * 1e6,
                    m.eval_speedup,
                    m.wall_speedup
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
