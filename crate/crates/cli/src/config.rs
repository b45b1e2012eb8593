//! Flag layout, optional config-file merging, and validation of everything
//! into a [`RunConfig`] ready for dispatch.
//!
//! Every subcommand flag is optional at the clap layer so a `key=value`
//! config file can fill the gaps; explicit flags always win. Unknown config
//! keys are rejected rather than ignored, so a typo cannot silently change
//! an experiment.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use mixlab_core::{
    parse_poly, CylinderSpec, FpScalar, IntBox, RatFunc, Rational, SUnitEquation, SUnitGroup,
    SearchLimits, Shape, SystemSpec,
};

use crate::parse::{
    parse_range, parse_ratfunc_list, parse_rational_list, parse_site_list, parse_subset,
    parse_value_list, parse_window,
};
use crate::CliError;

/// Default cap on window cells for the brute-force oracle.
pub const DEFAULT_MAX_CELLS: u64 = 24;

/// Default cap on candidate assignments per enumeration phase.
pub const DEFAULT_MAX_CANDIDATES: u64 = 1_000_000;

#[derive(Parser, Debug)]
#[command(
    name = "mixlab",
    version,
    about = "Exact mixing diagnostics for algebraic shift systems and S-unit equation searches"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Subcommand, Debug)]
pub enum CliCommand {
    /// Exact measure of one cylinder, or of the intersection of several
    Measure(MeasureArgs),
    /// Mixing-defect scan across a range of shape dilations
    Scan(ScanArgs),
    /// Witness-dimension scan across a range of shape dilations
    Witness(WitnessArgs),
    /// Brute-force window check of a cylinder measure
    Oracle(OracleArgs),
    /// Enumerate solutions of a unit equation inside an exponent box
    SunitEnum(SunitEnumArgs),
    /// Count the solution family with a prescribed vanishing subsum
    SunitFamily(SunitFamilyArgs),
    /// Iterate the p-th-power map on a tuple of rational functions
    SunitFrobenius(SunitFrobeniusArgs),
}

/// Flags shared by every subcommand.
#[derive(Args, Debug, Default)]
pub struct CommonArgs {
    /// Config file with key=value lines mirroring the flags
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output format: json (default) or csv
    #[arg(long)]
    pub format: Option<String>,
    /// Write the report to this file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
pub struct MeasureArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Field characteristic (a prime)
    #[arg(long)]
    pub p: Option<u64>,
    /// Lattice dimension
    #[arg(long)]
    pub d: Option<usize>,
    /// Defining relation, e.g. "1+u1+u2"
    #[arg(long)]
    pub poly: Option<String>,
    /// Cylinder sites, e.g. "(0,0);(1,0)"; repeat the flag for a joint event
    #[arg(long)]
    pub sites: Vec<String>,
    /// Cylinder values aligned with the matching --sites occurrence
    #[arg(long)]
    pub values: Vec<String>,
}

#[derive(Args, Debug, Default)]
pub struct ScanArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Field characteristic (a prime)
    #[arg(long)]
    pub p: Option<u64>,
    /// Lattice dimension
    #[arg(long)]
    pub d: Option<usize>,
    /// Defining relation, e.g. "1+u1+u2"
    #[arg(long)]
    pub poly: Option<String>,
    /// Shape points, e.g. "(0,0);(1,0);(0,1)"
    #[arg(long)]
    pub shape: Option<String>,
    /// Singleton values aligned with the shape points
    #[arg(long)]
    pub values: Option<String>,
    /// Inclusive dilation range lo:hi
    #[arg(long)]
    pub n: Option<String>,
}

#[derive(Args, Debug, Default)]
pub struct WitnessArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Field characteristic (a prime)
    #[arg(long)]
    pub p: Option<u64>,
    /// Lattice dimension
    #[arg(long)]
    pub d: Option<usize>,
    /// Defining relation, e.g. "1+u1+u2"
    #[arg(long)]
    pub poly: Option<String>,
    /// Shape points, e.g. "(0,0);(1,0);(0,1)"
    #[arg(long)]
    pub shape: Option<String>,
    /// Inclusive dilation range lo:hi
    #[arg(long)]
    pub n: Option<String>,
}

#[derive(Args, Debug, Default)]
pub struct OracleArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Field characteristic (a prime)
    #[arg(long)]
    pub p: Option<u64>,
    /// Lattice dimension
    #[arg(long)]
    pub d: Option<usize>,
    /// Defining relation, e.g. "1+u1+u2"
    #[arg(long)]
    pub poly: Option<String>,
    /// Cylinder sites, e.g. "(0,0);(1,0)"
    #[arg(long)]
    pub sites: Option<String>,
    /// Cylinder values aligned with the sites
    #[arg(long)]
    pub values: Option<String>,
    /// Window box lo:hi, e.g. "(0,0):(2,2)"
    #[arg(long)]
    pub window: Option<String>,
    /// Refuse windows with more cells than this
    #[arg(long)]
    pub max_cells: Option<u64>,
}

#[derive(Args, Debug, Default)]
pub struct SunitEnumArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Group generators as rationals, e.g. "2,3"
    #[arg(long)]
    pub gens: Option<String>,
    /// Equation coefficients as rationals, e.g. "1,1"
    #[arg(long)]
    pub coeffs: Option<String>,
    /// Exponent box half-width
    #[arg(long)]
    pub height: Option<i64>,
    /// Adjoin -1 to the group
    #[arg(long)]
    pub allow_sign: bool,
    /// Refuse searches needing more candidates than this
    #[arg(long)]
    pub max_candidates: Option<u64>,
}

#[derive(Args, Debug, Default)]
pub struct SunitFamilyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Group generators as rationals, e.g. "2,3"
    #[arg(long)]
    pub gens: Option<String>,
    /// Equation coefficients as rationals, e.g. "1,1,-1"
    #[arg(long)]
    pub coeffs: Option<String>,
    /// Vanishing-subsum term indices (1-based), e.g. "2,3"
    #[arg(long)]
    pub subset: Option<String>,
    /// Exponent box half-width
    #[arg(long)]
    pub height: Option<i64>,
    /// Adjoin -1 to the group
    #[arg(long)]
    pub allow_sign: bool,
    /// Refuse searches needing more candidates than this
    #[arg(long)]
    pub max_candidates: Option<u64>,
}

#[derive(Args, Debug, Default)]
pub struct SunitFrobeniusArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Field characteristic (a prime)
    #[arg(long)]
    pub p: Option<u64>,
    /// Starting tuple of rational functions, e.g. "t;1+t"
    #[arg(long)]
    pub base: Option<String>,
    /// Number of power-map steps to take
    #[arg(long)]
    pub steps: Option<u32>,
}

/// Output format for reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// A fully validated invocation: engine-ready objects only.
#[derive(Debug)]
pub struct RunConfig {
    pub command: CommandSpec,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

/// The dispatchable commands with all inputs parsed and checked.
#[derive(Debug)]
pub enum CommandSpec {
    Measure {
        system: SystemSpec,
        cylinders: Vec<CylinderSpec>,
    },
    Scan {
        system: SystemSpec,
        shape: Shape,
        values: Vec<FpScalar>,
        lo: u32,
        hi: u32,
    },
    Witness {
        system: SystemSpec,
        shape: Shape,
        lo: u32,
        hi: u32,
    },
    Oracle {
        system: SystemSpec,
        cylinder: CylinderSpec,
        window: IntBox,
        max_cells: u64,
    },
    SunitEnum {
        equation: SUnitEquation,
        height: i64,
        limits: SearchLimits,
    },
    SunitFamily {
        equation: SUnitEquation,
        subset: Vec<usize>,
        height: i64,
        limits: SearchLimits,
    },
    SunitFrobenius {
        base: Vec<RatFunc>,
        steps: u32,
    },
}

/// One key=value assignment from a config file, in file order.
type ConfigPairs = Vec<(String, String)>;

fn load_config_file(path: &PathBuf) -> Result<ConfigPairs, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    let mut pairs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::input(format!(
                "{}:{}: expected key=value, got `{line}`",
                path.display(),
                lineno + 1
            ))
        })?;
        pairs.push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(pairs)
}

fn parse_config_bool(key: &str, value: &str) -> Result<bool, CliError> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(CliError::input(format!(
            "config key `{key}` needs true or false, got `{value}`"
        ))),
    }
}

fn parse_config_int<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse::<T>()
        .map_err(|_| CliError::input(format!("config key `{key}` has a bad integer `{value}`")))
}

fn unknown_key(command: &str, key: &str) -> CliError {
    CliError::input(format!(
        "unknown config key `{key}` for command `{command}`"
    ))
}

/// Fills unset common flags. Returns false when the key is not a common one.
fn apply_common(common: &mut CommonArgs, key: &str, value: &str) -> Result<bool, CliError> {
    match key {
        "format" => {
            if common.format.is_none() {
                common.format = Some(value.to_string());
            }
            Ok(true)
        }
        "out" => {
            if common.out.is_none() {
                common.out = Some(PathBuf::from(value));
            }
            Ok(true)
        }
        "config" => Err(CliError::input(
            "config files cannot nest via a `config` key".to_string(),
        )),
        _ => Ok(false),
    }
}

macro_rules! fill {
    ($slot:expr, $value:expr) => {
        if $slot.is_none() {
            $slot = Some($value);
        }
    };
}

impl MeasureArgs {
    fn apply(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        if apply_common(&mut self.common, key, value)? {
            return Ok(());
        }
        match key {
            "p" => fill!(self.p, parse_config_int(key, value)?),
            "d" => fill!(self.d, parse_config_int(key, value)?),
            "poly" => fill!(self.poly, value.to_string()),
            // Repeated keys stack into extra cylinders, like repeated flags;
            // config occurrences only count when the flag was absent.
            "sites" => self.sites.push(value.to_string()),
            "values" => self.values.push(value.to_string()),
            _ => return Err(unknown_key("measure", key)),
        }
        Ok(())
    }
}

impl ScanArgs {
    fn apply(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        if apply_common(&mut self.common, key, value)? {
            return Ok(());
        }
        match key {
            "p" => fill!(self.p, parse_config_int(key, value)?),
            "d" => fill!(self.d, parse_config_int(key, value)?),
            "poly" => fill!(self.poly, value.to_string()),
            "shape" => fill!(self.shape, value.to_string()),
            "values" => fill!(self.values, value.to_string()),
            "n" => fill!(self.n, value.to_string()),
            _ => return Err(unknown_key("scan", key)),
        }
        Ok(())
    }
}

impl WitnessArgs {
    fn apply(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        if apply_common(&mut self.common, key, value)? {
            return Ok(());
        }
        match key {
            "p" => fill!(self.p, parse_config_int(key, value)?),
            "d" => fill!(self.d, parse_config_int(key, value)?),
            "poly" => fill!(self.poly, value.to_string()),
            "shape" => fill!(self.shape, value.to_string()),
            "n" => fill!(self.n, value.to_string()),
            _ => return Err(unknown_key("witness", key)),
        }
        Ok(())
    }
}

impl OracleArgs {
    fn apply(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        if apply_common(&mut self.common, key, value)? {
            return Ok(());
        }
        match key {
            "p" => fill!(self.p, parse_config_int(key, value)?),
            "d" => fill!(self.d, parse_config_int(key, value)?),
            "poly" => fill!(self.poly, value.to_string()),
            "sites" => fill!(self.sites, value.to_string()),
            "values" => fill!(self.values, value.to_string()),
            "window" => fill!(self.window, value.to_string()),
            "max-cells" => fill!(self.max_cells, parse_config_int(key, value)?),
            _ => return Err(unknown_key("oracle", key)),
        }
        Ok(())
    }
}

impl SunitEnumArgs {
    fn apply(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        if apply_common(&mut self.common, key, value)? {
            return Ok(());
        }
        match key {
            "gens" => fill!(self.gens, value.to_string()),
            "coeffs" => fill!(self.coeffs, value.to_string()),
            "height" => fill!(self.height, parse_config_int(key, value)?),
            "allow-sign" => self.allow_sign = self.allow_sign || parse_config_bool(key, value)?,
            "max-candidates" => fill!(self.max_candidates, parse_config_int(key, value)?),
            _ => return Err(unknown_key("sunit-enum", key)),
        }
        Ok(())
    }
}

impl SunitFamilyArgs {
    fn apply(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        if apply_common(&mut self.common, key, value)? {
            return Ok(());
        }
        match key {
            "gens" => fill!(self.gens, value.to_string()),
            "coeffs" => fill!(self.coeffs, value.to_string()),
            "subset" => fill!(self.subset, value.to_string()),
            "height" => fill!(self.height, parse_config_int(key, value)?),
            "allow-sign" => self.allow_sign = self.allow_sign || parse_config_bool(key, value)?,
            "max-candidates" => fill!(self.max_candidates, parse_config_int(key, value)?),
            _ => return Err(unknown_key("sunit-family", key)),
        }
        Ok(())
    }
}

impl SunitFrobeniusArgs {
    fn apply(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        if apply_common(&mut self.common, key, value)? {
            return Ok(());
        }
        match key {
            "p" => fill!(self.p, parse_config_int(key, value)?),
            "base" => fill!(self.base, value.to_string()),
            "steps" => fill!(self.steps, parse_config_int(key, value)?),
            _ => return Err(unknown_key("sunit-frobenius", key)),
        }
        Ok(())
    }
}

fn require<T>(slot: Option<T>, flag: &str) -> Result<T, CliError> {
    slot.ok_or_else(|| CliError::input(format!("missing --{flag} (and no config value)")))
}

fn resolve_format(text: Option<String>) -> Result<OutputFormat, CliError> {
    match text.as_deref() {
        None | Some("json") => Ok(OutputFormat::Json),
        Some("csv") => Ok(OutputFormat::Csv),
        Some(other) => Err(CliError::input(format!(
            "format must be json or csv, got `{other}`"
        ))),
    }
}

fn build_system(
    p: Option<u64>,
    d: Option<usize>,
    poly: Option<String>,
) -> Result<SystemSpec, CliError> {
    let p = require(p, "p")?;
    let d = require(d, "d")?;
    let poly = require(poly, "poly")?;
    Ok(SystemSpec::new(parse_poly(&poly, p, d)?)?)
}

fn build_cylinder(
    p: u64,
    d: usize,
    sites_text: &str,
    values_text: &str,
) -> Result<CylinderSpec, CliError> {
    let sites = parse_site_list(sites_text, d)?;
    let values = parse_value_list(values_text)?;
    if sites.len() != values.len() {
        return Err(CliError::input(format!(
            "{} sites but {} values",
            sites.len(),
            values.len()
        )));
    }
    Ok(CylinderSpec::new(p, d, sites.into_iter().zip(values))?)
}

/// Pairs shape points with their singleton values, then hands both over in
/// the shape's canonical (sorted) point order.
fn build_shape_with_values(
    d: usize,
    p: u64,
    shape_text: &str,
    values_text: &str,
) -> Result<(Shape, Vec<FpScalar>), CliError> {
    let points = parse_site_list(shape_text, d)?;
    let raw = parse_value_list(values_text)?;
    if points.len() != raw.len() {
        return Err(CliError::input(format!(
            "{} shape points but {} values",
            points.len(),
            raw.len()
        )));
    }
    let mut paired: Vec<_> = points.into_iter().zip(raw).collect();
    paired.sort_by(|a, b| a.0.cmp(&b.0));
    let shape = Shape::new(paired.iter().map(|(s, _)| s.clone()).collect())?;
    let values = paired
        .into_iter()
        .map(|(_, v)| FpScalar::new(v.rem_euclid(p as i64), p))
        .collect::<mixlab_core::Result<Vec<FpScalar>>>()?;
    Ok((shape, values))
}

fn build_equation(
    gens: Option<String>,
    coeffs: Option<String>,
    allow_sign: bool,
) -> Result<SUnitEquation, CliError> {
    let gens: Vec<Rational> = parse_rational_list(&require(gens, "gens")?)?;
    let coeffs = parse_rational_list(&require(coeffs, "coeffs")?)?;
    let group = SUnitGroup::new(gens, allow_sign)?;
    Ok(SUnitEquation::new(group, coeffs)?)
}

/// Trait tying each argument struct to its config-key filler.
trait ConfigTarget {
    fn common(&mut self) -> &mut CommonArgs;
    fn apply(&mut self, key: &str, value: &str) -> Result<(), CliError>;
}

macro_rules! config_target {
    ($($ty:ty),+) => {$(
        impl ConfigTarget for $ty {
            fn common(&mut self) -> &mut CommonArgs {
                &mut self.common
            }
            fn apply(&mut self, key: &str, value: &str) -> Result<(), CliError> {
                self.apply(key, value)
            }
        }
    )+};
}

config_target!(
    MeasureArgs,
    ScanArgs,
    WitnessArgs,
    OracleArgs,
    SunitEnumArgs,
    SunitFamilyArgs,
    SunitFrobeniusArgs
);

fn merge_config_file<A: ConfigTarget>(args: &mut A) -> Result<(), CliError> {
    if let Some(path) = args.common().config.clone() {
        for (key, value) in load_config_file(&path)? {
            ConfigTarget::apply(args, &key, &value)?;
        }
    }
    Ok(())
}

/// Applies the config file (if any) and validates one subcommand into its
/// engine-ready form.
pub fn resolve(cli: Cli) -> Result<RunConfig, CliError> {
    match cli.command {
        CliCommand::Measure(mut args) => {
            merge_config_file(&mut args)?;
            let format = resolve_format(args.common.format.clone())?;
            let p = require(args.p, "p")?;
            let d = require(args.d, "d")?;
            let poly = require(args.poly.clone(), "poly")?;
            let system = SystemSpec::new(parse_poly(&poly, p, d)?)?;
            if args.sites.len() != args.values.len() {
                return Err(CliError::input(format!(
                    "{} --sites occurrences but {} --values",
                    args.sites.len(),
                    args.values.len()
                )));
            }
            let mut cylinders = Vec::new();
            for (s, v) in args.sites.iter().zip(&args.values) {
                cylinders.push(build_cylinder(p, d, s, v)?);
            }
            if cylinders.is_empty() {
                cylinders.push(CylinderSpec::empty(p, d)?);
            }
            Ok(RunConfig {
                command: CommandSpec::Measure { system, cylinders },
                format,
                out: args.common.out,
            })
        }
        CliCommand::Scan(mut args) => {
            merge_config_file(&mut args)?;
            let format = resolve_format(args.common.format.clone())?;
            let system = build_system(args.p, args.d, args.poly.clone())?;
            let p = u64::from(system.modulus());
            let (shape, values) = build_shape_with_values(
                system.dim(),
                p,
                &require(args.shape.clone(), "shape")?,
                &require(args.values.clone(), "values")?,
            )?;
            let (lo, hi) = parse_range(&require(args.n.clone(), "n")?)?;
            Ok(RunConfig {
                command: CommandSpec::Scan {
                    system,
                    shape,
                    values,
                    lo,
                    hi,
                },
                format,
                out: args.common.out,
            })
        }
        CliCommand::Witness(mut args) => {
            merge_config_file(&mut args)?;
            let format = resolve_format(args.common.format.clone())?;
            let system = build_system(args.p, args.d, args.poly.clone())?;
            let points = parse_site_list(&require(args.shape.clone(), "shape")?, system.dim())?;
            let shape = Shape::new(points)?;
            let (lo, hi) = parse_range(&require(args.n.clone(), "n")?)?;
            Ok(RunConfig {
                command: CommandSpec::Witness {
                    system,
                    shape,
                    lo,
                    hi,
                },
                format,
                out: args.common.out,
            })
        }
        CliCommand::Oracle(mut args) => {
            merge_config_file(&mut args)?;
            let format = resolve_format(args.common.format.clone())?;
            let system = build_system(args.p, args.d, args.poly.clone())?;
            let p = u64::from(system.modulus());
            let cylinder = build_cylinder(
                p,
                system.dim(),
                &require(args.sites.clone(), "sites")?,
                &require(args.values.clone(), "values")?,
            )?;
            let window = parse_window(&require(args.window.clone(), "window")?, system.dim())?;
            let max_cells = args.max_cells.unwrap_or(DEFAULT_MAX_CELLS);
            Ok(RunConfig {
                command: CommandSpec::Oracle {
                    system,
                    cylinder,
                    window,
                    max_cells,
                },
                format,
                out: args.common.out,
            })
        }
        CliCommand::SunitEnum(mut args) => {
            merge_config_file(&mut args)?;
            let format = resolve_format(args.common.format.clone())?;
            let equation = build_equation(args.gens.clone(), args.coeffs.clone(), args.allow_sign)?;
            let height = require(args.height, "height")?;
            if height < 0 {
                return Err(CliError::input("height must be nonnegative".to_string()));
            }
            let limits = SearchLimits {
                max_candidates: args.max_candidates.unwrap_or(DEFAULT_MAX_CANDIDATES),
            };
            Ok(RunConfig {
                command: CommandSpec::SunitEnum {
                    equation,
                    height,
                    limits,
                },
                format,
                out: args.common.out,
            })
        }
        CliCommand::SunitFamily(mut args) => {
            merge_config_file(&mut args)?;
            let format = resolve_format(args.common.format.clone())?;
            let equation = build_equation(args.gens.clone(), args.coeffs.clone(), args.allow_sign)?;
            let subset = parse_subset(&require(args.subset.clone(), "subset")?)?;
            let height = require(args.height, "height")?;
            if height < 0 {
                return Err(CliError::input("height must be nonnegative".to_string()));
            }
            let limits = SearchLimits {
                max_candidates: args.max_candidates.unwrap_or(DEFAULT_MAX_CANDIDATES),
            };
            Ok(RunConfig {
                command: CommandSpec::SunitFamily {
                    equation,
                    subset,
                    height,
                    limits,
                },
                format,
                out: args.common.out,
            })
        }
        CliCommand::SunitFrobenius(mut args) => {
            merge_config_file(&mut args)?;
            let format = resolve_format(args.common.format.clone())?;
            let p = require(args.p, "p")?;
            let base = parse_ratfunc_list(&require(args.base.clone(), "base")?, p)?;
            let steps = require(args.steps, "steps")?;
            Ok(RunConfig {
                command: CommandSpec::SunitFrobenius { base, steps },
                format,
                out: args.common.out,
            })
        }
    }
}
