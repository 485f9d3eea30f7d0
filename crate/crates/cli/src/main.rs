mod output;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use bigdecimal::BigDecimal;
use clap::{Parser, Subcommand};

use fal_spectrum::approx::{self, ApproxOptions, DensityMode};
use fal_spectrum::bounds::{self, ScanOptions};
use fal_spectrum::calculus;
use fal_spectrum::catalog::{self, Catalog};
use fal_spectrum::numerics::{self, ExactReal, PrecisionContext};
use fal_spectrum::{Error, Result};

use output::{Format, Output};

/// Exact calculus and search for volume densities of fully augmented links.
#[derive(Debug, Parser)]
#[command(name = "fal-spectrum", version)]
struct Cli {
    /// Decimal digits after the point in every printed value.
    #[arg(
        long,
        global = true,
        env = "FAL_SPECTRUM_DIGITS",
        default_value_t = PrecisionContext::DEFAULT_DIGITS,
        value_parser = clap::value_parser!(u32).range(i64::from(PrecisionContext::MIN_DIGITS)..)
    )]
    digits: u32,

    /// Output format. Defaults to the extension of --out, else table.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write data here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print v_oct, v_tet, 2 v_oct and 10 v_tet.
    Constants,
    /// Inspect a catalog file.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Check every catalog entry against the spectrum bounds.
    Validate { catalog: PathBuf },
    /// Volume, augmentation counts and densities of a belted sum.
    Density {
        /// Catalog file; only the built-in L41 is available without one.
        catalog: Option<PathBuf>,
        /// Comma-separated `name*multiplicity` terms, e.g. "L41*2,S*3".
        #[arg(long)]
        recipe: String,
    },
    /// Build a recipe whose density lies within --eps of --target.
    Approximate {
        catalog: Option<PathBuf>,
        #[arg(long)]
        l1: String,
        #[arg(long)]
        l2: String,
        /// A decimal or an exact form such as "9/4*voct+1/2".
        #[arg(long, value_parser = parse_real)]
        target: ExactReal,
        #[arg(long)]
        eps: BigDecimal,
        #[arg(long, default_value = "vdmod", value_parser = parse_mode)]
        mode: DensityMode,
        #[arg(long, default_value_t = ApproxOptions::DEFAULT_MAX_DENOMINATOR)]
        max_denominator: u64,
    },
    /// Euler characteristic and lower bounds for `a` augmentations.
    Bounds {
        #[arg(long)]
        a: u64,
    },
    /// Largest augmentation count compatible with vd <= --density.
    Certify {
        #[arg(long, value_parser = parse_real)]
        density: ExactReal,
    },
    /// Which window of the density line --density falls in.
    Classify {
        #[arg(long, value_parser = parse_real)]
        density: ExactReal,
    },
    /// Every belted sum of catalog entries with total modified augmentation
    /// count at most --budget, sorted by vd.
    Scan {
        catalog: Option<PathBuf>,
        #[arg(long)]
        budget: u64,
        #[arg(long, default_value_t = ScanOptions::DEFAULT_ROW_CAP)]
        row_cap: u128,
    },
}

#[derive(Debug, Subcommand)]
enum CatalogAction {
    /// List the entries of a catalog file, including the built-in L41.
    List { catalog: PathBuf },
}

fn parse_real(text: &str) -> std::result::Result<ExactReal, String> {
    ExactReal::from_str(text).map_err(|e| e.to_string())
}

fn parse_mode(text: &str) -> std::result::Result<DensityMode, String> {
    DensityMode::from_str(text).map_err(|e| e.to_string())
}

fn load(path: &Path) -> Result<Catalog> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    catalog::load_catalog(&text)
}

fn load_or_builtin(path: Option<&PathBuf>) -> Result<Catalog> {
    path.map_or_else(|| Ok(Catalog::builtin()), |p| load(p))
}

struct Runner {
    ctx: PrecisionContext,
}

impl Runner {
    fn decimal(&self, x: &BigDecimal) -> String {
        numerics::format_decimal(x, self.ctx.digits())
    }

    fn value(&self, x: &ExactReal) -> String {
        self.decimal(&x.evaluate(&self.ctx))
    }

    fn run(&self, command: &Command) -> Result<Output> {
        let ctx = &self.ctx;
        Ok(match command {
            Command::Constants => {
                let two = bounds::Boundary::TwoVOct.value();
                let ten = bounds::Boundary::TenVTet.value();
                Output::record([
                    ("v_oct", self.decimal(&numerics::v_oct(ctx))),
                    ("v_tet", self.decimal(&numerics::v_tet(ctx))),
                    ("2*v_oct", self.value(&two)),
                    ("10*v_tet", self.value(&ten)),
                ])
            }
            Command::Catalog {
                action: CatalogAction::List { catalog },
            } => {
                let catalog = load(catalog)?;
                let rows = catalog
                    .iter()
                    .map(|link| {
                        let volume = link.volume();
                        vec![
                            link.name().to_string(),
                            link.augmentations().to_string(),
                            volume.c_oct().to_string(),
                            volume.c_tet().to_string(),
                            volume.remainder().to_plain_string(),
                            self.decimal(&volume.evaluate(ctx)),
                            self.value(&link.density()),
                            self.value(&link.modified_density()),
                            link.note().to_string(),
                        ]
                    })
                    .collect();
                Output::rows(
                    ["name", "a", "c_oct", "c_tet", "remainder", "volume", "vd", "vdmod", "note"],
                    rows,
                )
            }
            Command::Validate { catalog } => {
                let catalog = load(catalog)?;
                let mut rows = Vec::new();
                for link in catalog.iter() {
                    let diagnostics = catalog::validate_entry(link, ctx);
                    if diagnostics.is_empty() {
                        rows.push(vec![link.name().to_string(), "ok".into(), String::new()]);
                    }
                    for d in diagnostics {
                        eprintln!("{d}");
                        rows.push(vec![d.link, format!("{:?}", d.kind), d.message]);
                    }
                }
                Output::rows(["name", "status", "message"], rows)
            }
            Command::Density { catalog, recipe } => {
                let catalog = load_or_builtin(catalog.as_ref())?;
                let composition = calculus::parse_recipe(recipe, &catalog)?;
                let volume = calculus::volume(&composition);
                let vd = calculus::vd(&composition, ctx);
                let vd_mod = calculus::vd_mod(&composition, ctx);
                Output::record([
                    ("recipe", composition.recipe_string()),
                    ("volume_exact", volume.to_exact().to_string()),
                    ("volume_decimal", self.decimal(&volume.evaluate(ctx))),
                    ("a", calculus::augmentations(&composition).to_string()),
                    ("atilde", calculus::modified_augmentations(&composition).to_string()),
                    ("vd_exact", vd.exact().to_string()),
                    ("vd_decimal", self.decimal(vd.evaluated())),
                    ("vdmod_exact", vd_mod.exact().to_string()),
                    ("vdmod_decimal", self.decimal(vd_mod.evaluated())),
                ])
            }
            Command::Approximate {
                catalog,
                l1,
                l2,
                target,
                eps,
                mode,
                max_denominator,
            } => {
                let catalog = load_or_builtin(catalog.as_ref())?;
                let options = ApproxOptions {
                    max_denominator: *max_denominator,
                };
                let recipe = approx::approximate(
                    *mode,
                    target,
                    catalog.get(l1)?,
                    catalog.get(l2)?,
                    eps,
                    ctx,
                    &options,
                )?;
                Output::record([
                    ("mode", recipe.mode.to_string()),
                    ("l1", recipe.first.clone()),
                    ("l2", recipe.second.clone()),
                    ("k", recipe.k.to_string()),
                    ("l", recipe.l.to_string()),
                    ("m", recipe.m.to_string()),
                    ("target_exact", recipe.target.to_string()),
                    ("target_decimal", self.value(&recipe.target)),
                    ("vd_exact", recipe.achieved_vd.exact().to_string()),
                    ("vd_decimal", self.decimal(recipe.achieved_vd.evaluated())),
                    ("vdmod_exact", recipe.achieved_vd_mod.exact().to_string()),
                    ("vdmod_decimal", self.decimal(recipe.achieved_vd_mod.evaluated())),
                    ("error", self.decimal(&recipe.error_decimal)),
                    ("recipe", recipe.recipe_string()),
                ])
            }
            Command::Bounds { a } => {
                let volume = bounds::miyamoto_volume_bound(*a)?;
                let vd = bounds::vd_bound(u128::from(*a))?;
                Output::record([
                    ("a", a.to_string()),
                    ("chi", bounds::euler_characteristic(*a)?.to_string()),
                    ("volume_lower_bound_exact", volume.to_string()),
                    ("volume_lower_bound_decimal", self.value(&volume)),
                    ("vd_lower_bound_exact", vd.to_string()),
                    ("vd_lower_bound_decimal", self.value(&vd)),
                ])
            }
            Command::Certify { density } => {
                let certificate = bounds::max_augmentations_below(density, ctx)?;
                Output::record([
                    ("threshold_exact", certificate.threshold.to_string()),
                    ("threshold_decimal", self.decimal(&certificate.threshold_decimal)),
                    ("max_augmentations", certificate.max_augmentations.to_string()),
                    ("near_boundary", boundary_text(certificate.near_boundary)),
                    ("statement", certificate.statement),
                ])
            }
            Command::Classify { density } => {
                let classification = bounds::classify(density, ctx)?;
                Output::record([
                    ("density_exact", density.to_string()),
                    ("density_decimal", self.value(density)),
                    ("class", classification.class.to_string()),
                    ("near_boundary", boundary_text(classification.near_boundary)),
                ])
            }
            Command::Scan {
                catalog,
                budget,
                row_cap,
            } => {
                let catalog = load_or_builtin(catalog.as_ref())?;
                let options = ScanOptions { row_cap: *row_cap };
                let rows = bounds::spectrum_scan(&catalog, *budget, ctx, &options)?;
                Output::rows(
                    bounds::SCAN_COLUMNS,
                    rows.iter().map(|r| r.cells(ctx.digits()).to_vec()).collect(),
                )
            }
        })
    }
}

fn boundary_text(boundary: Option<bounds::Boundary>) -> String {
    boundary.map_or_else(|| "none".to_string(), |b| b.to_string())
}

fn emit(output: &Output, format: Format, path: Option<&PathBuf>) -> Result<()> {
    match path {
        Some(path) => {
            let mut file = io::BufWriter::new(fs::File::create(path)?);
            output.write(format, &mut file)?;
            file.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            output.write(format, &mut lock)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = match PrecisionContext::new(cli.digits) {
        Ok(ctx) => ctx,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let format = cli
        .format
        .or_else(|| cli.out.as_deref().and_then(Format::from_path))
        .unwrap_or(Format::Table);
    let result = Runner { ctx }
        .run(&cli.command)
        .and_then(|output| emit(&output, format, cli.out.as_ref()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
