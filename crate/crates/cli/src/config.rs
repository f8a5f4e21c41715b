//! Command-line flags, the optional `key=value` config file, and the merged
//! [`RunConfig`].

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use lime_core::{default_kernel_radius, DenoiserSpec, EnhanceParams, Preconditioner, RefineMode};

/// Gamma used by the plain gamma-correction arm when `--gamma` is not given.
pub const DEFAULT_GC_GAMMA: f64 = 0.4;
pub const DEFAULT_DENOISE_STRENGTH: f64 = 1.0;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Structure-aware illumination refinement
    Lime,
    /// Refinement with unit weights
    Tv,
    /// Windowed maximum of the initial map
    Max,
    /// Windowed mean of the initial map
    Mean,
    /// Initial max-RGB map, unrefined
    None,
    /// Dehazing of the inverted image
    Dehz,
    /// Histogram equalization of luma
    He,
    /// Per-channel gamma correction
    Gc,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum PrecondKind {
    /// Modified incomplete Cholesky
    Mic,
    /// Inverse diagonal
    Jacobi,
}

impl From<PrecondKind> for Preconditioner {
    fn from(kind: PrecondKind) -> Self {
        match kind {
            PrecondKind::Mic => Preconditioner::ModifiedIncompleteCholesky,
            PrecondKind::Jacobi => Preconditioner::Jacobi,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum DenoiseKind {
    None,
    Gaussian,
    External,
}

impl Method {
    fn name(self) -> String {
        self.to_possible_value()
            .expect("no skipped variants")
            .get_name()
            .to_string()
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Parser, Debug, Default)]
#[command(name = "lime", version)]
#[command(about = "Enhance low-light images by illumination map estimation")]
pub struct Cli {
    /// Input image (PNG or binary PPM), or a directory for batch mode
    pub input: PathBuf,

    /// Output PNG (or directory in batch mode)
    #[arg(short, long)]
    pub out: Option<PathBuf>,

    /// key=value file supplying defaults for any flag below
    #[arg(long)]
    pub config: Option<PathBuf>,

    #[arg(short, long, value_enum)]
    pub method: Option<Method>,

    /// Smoothness weight [default: 0.15]
    #[arg(long)]
    pub alpha: Option<f64>,

    /// Gaussian window standard deviation in pixels [default: 2]
    #[arg(long)]
    pub sigma: Option<f64>,

    /// Illumination gamma [default: 0.8; 0.4 for --method gc]
    #[arg(long)]
    pub gamma: Option<f64>,

    /// Denominator stabilizer [default: 0.001]
    #[arg(long)]
    pub epsilon: Option<f64>,

    /// Gaussian window truncation radius [default: ceil(2 sigma)]
    #[arg(long)]
    pub radius: Option<usize>,

    /// Window radius for the max/mean refinements [default: 7]
    #[arg(long)]
    pub local_radius: Option<usize>,

    #[arg(long, value_enum)]
    pub denoise: Option<DenoiseKind>,

    /// Blur sigma for the gaussian denoiser [default: 1.0]
    #[arg(long)]
    pub denoise_strength: Option<f64>,

    /// External denoiser command with {in} and {out} placeholders
    #[arg(long)]
    pub denoise_cmd: Option<String>,

    /// Also write the initial map, weights and refined map as PNGs
    #[arg(long)]
    pub dump_maps: bool,

    /// Solver relative residual [default: 1e-6]
    #[arg(long)]
    pub tol: Option<f64>,

    /// Solver iteration cap [default: 5000]
    #[arg(long)]
    pub max_iter: Option<usize>,

    /// Solver preconditioner [default: mic]
    #[arg(long, value_enum)]
    pub preconditioner: Option<PrecondKind>,

    /// Worker threads in batch mode [default: logical cores]
    #[arg(long)]
    pub jobs: Option<usize>,
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub method: Method,
    pub params: EnhanceParams,
    pub local_radius: usize,
    pub denoiser: DenoiserSpec,
    pub dump_maps: bool,
    pub input: PathBuf,
    pub output: PathBuf,
    pub jobs: Option<usize>,
}

impl RunConfig {
    pub fn refine_mode(&self) -> Option<RefineMode> {
        Some(match self.method {
            Method::Lime => RefineMode::Lime,
            Method::Tv => RefineMode::Tv,
            Method::None => RefineMode::None,
            Method::Max => RefineMode::Max {
                radius: self.local_radius,
            },
            Method::Mean => RefineMode::Mean {
                radius: self.local_radius,
            },
            Method::Dehz | Method::He | Method::Gc => return None,
        })
    }
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

/// Parsed `key=value` lines. Blank lines and `#` comments are skipped; keys
/// are flag names without the leading dashes (`_` and `-` are equivalent).
#[derive(Debug, Default)]
pub struct ConfigFile {
    entries: HashMap<String, String>,
}

const KNOWN_KEYS: &[&str] = &[
    "out",
    "method",
    "alpha",
    "sigma",
    "gamma",
    "epsilon",
    "radius",
    "local-radius",
    "denoise",
    "denoise-strength",
    "denoise-cmd",
    "dump-maps",
    "tol",
    "max-iter",
    "preconditioner",
    "jobs",
];

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = HashMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                ConfigError(format!(
                    "line {}: expected key=value, got `{line}`",
                    lineno + 1
                ))
            })?;
            let key = key.trim().replace('_', "-");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(ConfigError(format!(
                    "line {}: unknown key `{key}`",
                    lineno + 1
                )));
            }
            entries.insert(key, value.trim().to_string());
        }
        Ok(ConfigFile { entries })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError> {
        self.entries
            .get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| ConfigError(format!("config key `{key}`: cannot parse `{v}`")))
            })
            .transpose()
    }

    fn get_enum<T: ValueEnum>(&self, key: &str) -> Result<Option<T>, ConfigError> {
        self.entries
            .get(key)
            .map(|v| {
                T::from_str(v, true).map_err(|e| ConfigError(format!("config key `{key}`: {e}")))
            })
            .transpose()
    }

    fn get_bool(&self, key: &str) -> Result<Option<bool>, ConfigError> {
        match self.entries.get(key).map(|v| v.to_ascii_lowercase()) {
            None => Ok(None),
            Some(v) if ["1", "true", "yes", "on"].contains(&v.as_str()) => Ok(Some(true)),
            Some(v) if ["0", "false", "no", "off"].contains(&v.as_str()) => Ok(Some(false)),
            Some(v) => Err(ConfigError(format!(
                "config key `{key}`: not a boolean: `{v}`"
            ))),
        }
    }
}

fn default_output(input: &Path, method: Method, batch: bool) -> PathBuf {
    if batch {
        return input.join("enhanced");
    }
    let stem = input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "image".into());
    input.with_file_name(format!("{stem}_{method}.png"))
}

/// Command line first, then the config file, then built-in defaults.
pub fn resolve(cli: &Cli) -> Result<RunConfig, ConfigError> {
    let file = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };

    let method = cli
        .method
        .or(file.get_enum("method")?)
        .unwrap_or(Method::Lime);
    let sigma = cli
        .sigma
        .or(file.get("sigma")?)
        .unwrap_or(lime_core::DEFAULT_SIGMA);
    let default_gamma = if method == Method::Gc {
        DEFAULT_GC_GAMMA
    } else {
        lime_core::DEFAULT_GAMMA
    };
    let params = EnhanceParams {
        alpha: cli
            .alpha
            .or(file.get("alpha")?)
            .unwrap_or(lime_core::DEFAULT_ALPHA),
        sigma,
        epsilon: cli
            .epsilon
            .or(file.get("epsilon")?)
            .unwrap_or(lime_core::DEFAULT_EPSILON),
        gamma: cli.gamma.or(file.get("gamma")?).unwrap_or(default_gamma),
        solver_tol: cli
            .tol
            .or(file.get("tol")?)
            .unwrap_or(lime_core::DEFAULT_SOLVER_TOL),
        solver_max_iter: cli
            .max_iter
            .or(file.get("max-iter")?)
            .unwrap_or(lime_core::DEFAULT_SOLVER_MAX_ITER),
        kernel_radius: cli
            .radius
            .or(file.get("radius")?)
            .unwrap_or_else(|| default_kernel_radius(sigma)),
        preconditioner: cli
            .preconditioner
            .or(file.get_enum("preconditioner")?)
            .map(Preconditioner::from)
            .unwrap_or_default(),
    };
    params.validate().map_err(|e| ConfigError(e.to_string()))?;

    let command: Option<String> = cli.denoise_cmd.clone().or(file.get("denoise-cmd")?);
    let kind = cli
        .denoise
        .or(file.get_enum("denoise")?)
        .unwrap_or(if command.is_some() {
            DenoiseKind::External
        } else {
            DenoiseKind::None
        });
    let strength = cli
        .denoise_strength
        .or(file.get("denoise-strength")?)
        .unwrap_or(DEFAULT_DENOISE_STRENGTH);
    let denoiser = match kind {
        DenoiseKind::None => DenoiserSpec::None,
        DenoiseKind::Gaussian => DenoiserSpec::Gaussian { strength },
        DenoiseKind::External => DenoiserSpec::External {
            command: command
                .ok_or_else(|| ConfigError("--denoise external needs --denoise-cmd".into()))?,
        },
    };
    denoiser
        .validate()
        .map_err(|e| ConfigError(e.to_string()))?;

    let batch = cli.input.is_dir();
    let output = cli
        .out
        .clone()
        .or(file.get::<PathBuf>("out")?)
        .unwrap_or_else(|| default_output(&cli.input, method, batch));
    if cli.input.as_os_str().is_empty() || output.as_os_str().is_empty() {
        return Err(ConfigError(
            "input and output paths must be nonempty".into(),
        ));
    }

    let jobs = cli.jobs.or(file.get("jobs")?);
    if jobs == Some(0) {
        return Err(ConfigError("--jobs must be at least 1".into()));
    }

    Ok(RunConfig {
        method,
        params,
        local_radius: cli
            .local_radius
            .or(file.get("local-radius")?)
            .unwrap_or(lime_core::DEFAULT_LOCAL_RADIUS),
        denoiser,
        dump_maps: cli.dump_maps || file.get_bool("dump-maps")?.unwrap_or(false),
        input: cli.input.clone(),
        output,
        jobs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("lime").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn defaults_are_the_published_constants() {
        let cfg = resolve(&cli(&["in.png"])).unwrap();
        assert_eq!(cfg.method, Method::Lime);
        assert_eq!(cfg.params.alpha, 0.15);
        assert_eq!(cfg.params.sigma, 2.0);
        assert_eq!(cfg.params.gamma, 0.8);
        assert_eq!(cfg.params.epsilon, 1e-3);
        assert_eq!(cfg.params.kernel_radius, 4);
        assert_eq!(
            cfg.params.preconditioner,
            Preconditioner::ModifiedIncompleteCholesky
        );
        assert_eq!(cfg.denoiser, DenoiserSpec::None);
        assert_eq!(cfg.output, PathBuf::from("in_lime.png"));
    }

    #[test]
    fn gc_has_its_own_gamma_default() {
        let cfg = resolve(&cli(&["in.png", "--method", "gc"])).unwrap();
        assert_eq!(cfg.params.gamma, 0.4);
        let cfg = resolve(&cli(&["in.png", "--method", "gc", "--gamma", "1"])).unwrap();
        assert_eq!(cfg.params.gamma, 1.0);
    }

    #[test]
    fn radius_follows_sigma_unless_given() {
        let cfg = resolve(&cli(&["x.png", "--sigma", "3"])).unwrap();
        assert_eq!(cfg.params.kernel_radius, 6);
        let cfg = resolve(&cli(&["x.png", "--sigma", "3", "--radius", "2"])).unwrap();
        assert_eq!(cfg.params.kernel_radius, 2);
    }

    #[test]
    fn denoiser_selection() {
        let cfg = resolve(&cli(&["x.png", "--denoise", "gaussian"])).unwrap();
        assert_eq!(cfg.denoiser, DenoiserSpec::Gaussian { strength: 1.0 });
        let cfg = resolve(&cli(&["x.png", "--denoise-cmd", "cp {in} {out}"])).unwrap();
        assert_eq!(
            cfg.denoiser,
            DenoiserSpec::External {
                command: "cp {in} {out}".into()
            }
        );
        assert!(resolve(&cli(&["x.png", "--denoise", "external"])).is_err());
    }

    #[test]
    fn config_file_is_overridden_by_flags() {
        let dir = tempfile_dir();
        let path = dir.join("lime.conf");
        std::fs::write(
            &path,
            "# comment\nalpha = 0.3\npreconditioner=jacobi\ngamma=0.5\nmethod=tv\ndump_maps=true\nlocal-radius=3\n",
        )
        .unwrap();
        let p = path.to_str().unwrap();
        let cfg = resolve(&cli(&["x.png", "--config", p, "--alpha", "0.2"])).unwrap();
        assert_eq!(cfg.params.alpha, 0.2);
        assert_eq!(cfg.params.gamma, 0.5);
        assert_eq!(cfg.method, Method::Tv);
        assert!(cfg.dump_maps);
        assert_eq!(cfg.local_radius, 3);
        assert_eq!(cfg.params.preconditioner, Preconditioner::Jacobi);
        std::fs::remove_dir_all(dir).ok();
    }

    #[test]
    fn config_file_errors() {
        assert!(ConfigFile::parse("alpha").is_err());
        assert!(ConfigFile::parse("colour=red").is_err());
        let f = ConfigFile::parse("alpha=abc\ndump-maps=maybe").unwrap();
        assert!(f.get::<f64>("alpha").is_err());
        assert!(f.get_bool("dump-maps").is_err());
    }

    #[test]
    fn invalid_values_are_rejected() {
        assert!(resolve(&cli(&["x.png", "--alpha=-1"])).is_err());
        assert!(resolve(&cli(&["x.png", "--gamma", "0"])).is_err());
        assert!(resolve(&cli(&["x.png", "--jobs", "0"])).is_err());
    }

    fn tempfile_dir() -> PathBuf {
        let dir = std::env::temp_dir().join(format!("lime-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        dir
    }
}
