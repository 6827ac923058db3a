//! Flag and config-file handling shared by every subcommand.

use std::path::{Path, PathBuf};

use clap::Args;
use jointaug_core::{AugmentConfig, ConfigOverrides, Error, Result};

/// Sampling flags. A `--config` TOML file uses the same names with
/// underscores and may also set `seed` and `count`; flags win.
#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// TOML file with default values for any of the flags below.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// random-crop, joint-crop, joint-blur, joint-color or joint-crop-or-blur.
    #[arg(long)]
    pub mode: Option<String>,
    /// Difficulty control in [-8, 8]; 0 means a uniform log-ratio.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub s_min: Option<f64>,
    #[arg(long)]
    pub s_max: Option<f64>,
    #[arg(long)]
    pub sigma_min: Option<f64>,
    #[arg(long)]
    pub sigma_max: Option<f64>,
    /// Colour factors are drawn from [1 - f, 1 + f].
    #[arg(long)]
    pub color_factor: Option<f64>,
    /// brightness, contrast or both.
    #[arg(long)]
    pub color_target: Option<String>,
    #[arg(long)]
    pub aspect_lo: Option<f64>,
    #[arg(long)]
    pub aspect_hi: Option<f64>,
    #[arg(long, value_name = "PX")]
    pub out_size: Option<u32>,
    #[arg(long)]
    pub blur_prob_a: Option<f64>,
    #[arg(long)]
    pub blur_prob_b: Option<f64>,
    /// Chance that a joint-crop-or-blur pair controls the crop.
    #[arg(long)]
    pub crop_prob: Option<f64>,
    /// Source width assumed when sampling parameters without images.
    #[arg(long, value_name = "PX")]
    pub image_w: Option<u32>,
    #[arg(long, value_name = "PX")]
    pub image_h: Option<u32>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct RunSettings {
    pub config: AugmentConfig,
    pub seed: u64,
    /// `count` from the config file, if any.
    pub count: Option<u64>,
}

impl ConfigArgs {
    fn overrides(&self) -> ConfigOverrides {
        ConfigOverrides {
            mode: self.mode.clone(),
            beta: self.beta,
            s_min: self.s_min,
            s_max: self.s_max,
            sigma_min: self.sigma_min,
            sigma_max: self.sigma_max,
            color_factor: self.color_factor,
            color_target: self.color_target.clone(),
            aspect_lo: self.aspect_lo,
            aspect_hi: self.aspect_hi,
            out_size: self.out_size,
            blur_prob_a: self.blur_prob_a,
            blur_prob_b: self.blur_prob_b,
            crop_prob: self.crop_prob,
            image_w: self.image_w,
            image_h: self.image_h,
        }
    }

    pub fn resolve(&self) -> Result<RunSettings> {
        let file = match &self.config {
            Some(path) => load_config_file(path)?,
            None => FileSettings::default(),
        };
        let config = file.overrides.merge(&self.overrides()).resolve()?;
        Ok(RunSettings {
            config,
            seed: self.seed.or(file.seed).unwrap_or(0),
            count: file.count,
        })
    }
}

#[derive(Debug, Default)]
struct FileSettings {
    overrides: ConfigOverrides,
    seed: Option<u64>,
    count: Option<u64>,
}

fn load_config_file(path: &Path) -> Result<FileSettings> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_config(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn take_u64(table: &mut toml::Table, key: &str) -> std::result::Result<Option<u64>, String> {
    match table.remove(key) {
        None => Ok(None),
        Some(toml::Value::Integer(v)) if v >= 0 => Ok(Some(v as u64)),
        Some(other) => Err(format!(
            "`{key}` must be a non-negative integer, got {other}"
        )),
    }
}

fn parse_config(text: &str) -> std::result::Result<FileSettings, String> {
    let mut table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| e.message().to_owned())?;
    let seed = take_u64(&mut table, "seed")?;
    let count = take_u64(&mut table, "count")?;
    let overrides: ConfigOverrides = toml::Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| e.message().to_owned())?;
    Ok(FileSettings {
        overrides,
        seed,
        count,
    })
}
