//! Orchestration: assemble blocks, diagonalize, merge, and hand structured
//! results to the writers in [`crate::io`].

use cauchy_well_core::eigensolver::{eigh, eigvals_only, EigenPair, EigenSolveOptions};
use cauchy_well_core::galerkin::{assemble, diagonal_analytic, GalerkinBlock, QuadratureSpec};
use cauchy_well_core::operator::Parity;
use cauchy_well_core::spectrum::{
    asymptotic_estimate, merge, AsymptoticRow, Level, SpectrumReport,
};

use crate::config::{CliError, ParityChoice, RunConfig};
use crate::references;

/// Values-only spectrum solve per the configuration. Returns the report and
/// the assembled blocks (for optional serialization).
pub fn solve_spectrum(cfg: &RunConfig) -> Result<(SpectrumReport, Vec<GalerkinBlock>), CliError> {
    cfg.validate()?;
    let n = cfg.block_size;
    let opts = EigenSolveOptions {
        compute_vectors: false,
        ..Default::default()
    };

    let (report, blocks) = match cfg.parity {
        ParityChoice::Both => {
            let even_block = assemble(Parity::Even, n, &cfg.quad)?;
            let odd_block = assemble(Parity::Odd, n, &cfg.quad)?;
            let take = cfg.levels.min(n);
            let even = to_pairs(eigvals_only(&even_block, take, &opts)?, Parity::Even);
            let odd = to_pairs(eigvals_only(&odd_block, take, &opts)?, Parity::Odd);
            (merge(&even, &odd, cfg.levels)?, vec![even_block, odd_block])
        }
        ParityChoice::Even => single_parity_report(Parity::Even, cfg, &opts)?,
        ParityChoice::Odd => single_parity_report(Parity::Odd, cfg, &opts)?,
    };
    finish(report, n, blocks)
}

fn finish(
    mut report: SpectrumReport,
    block_size: usize,
    blocks: Vec<GalerkinBlock>,
) -> Result<(SpectrumReport, Vec<GalerkinBlock>), CliError> {
    for level in &mut report.levels {
        level.source_block_size = block_size;
    }
    let refs: Vec<_> = references::kkms_references(10)
        .into_iter()
        .filter(|r| report.levels.iter().any(|l| l.n == r.n))
        .collect();
    report.references = if refs.is_empty() { None } else { Some(refs) };
    Ok((report, blocks))
}

fn to_pairs(values: Vec<f64>, parity: Parity) -> Vec<EigenPair> {
    values
        .into_iter()
        .map(|value| EigenPair {
            value,
            vector: Vec::new(),
            parity,
            residual: f64::NAN,
        })
        .collect()
}

/// Diagnostic single-parity run. Levels are labelled by their *physical*
/// position (parity alternation makes the j-th even level the physical level
/// 2j−1 and the j-th odd level the physical 2j), so the asymptotic column
/// stays meaningful.
fn single_parity_report(
    parity: Parity,
    cfg: &RunConfig,
    opts: &EigenSolveOptions,
) -> Result<(SpectrumReport, Vec<GalerkinBlock>), CliError> {
    let block = assemble(parity, cfg.block_size, &cfg.quad)?;
    let values = eigvals_only(&block, cfg.levels, opts)?;
    let levels: Vec<Level> = values
        .iter()
        .enumerate()
        .map(|(j, &energy)| Level {
            n: match parity {
                Parity::Even => 2 * j + 1,
                Parity::Odd => 2 * (j + 1),
            },
            energy,
            parity,
            source_block_size: cfg.block_size,
        })
        .collect();
    let asymptotic: Vec<AsymptoticRow> = levels
        .iter()
        .map(|l| {
            let estimate = asymptotic_estimate(l.n);
            AsymptoticRow {
                n: l.n,
                estimate,
                relative_error: (l.energy - estimate).abs() / l.energy,
            }
        })
        .collect();
    Ok((
        SpectrumReport {
            levels,
            asymptotic,
            references: None,
        },
        vec![block],
    ))
}

/// Full-vector solve for eigenfunction work: merged report plus the pair
/// backing each merged level, in level order.
pub fn solve_pairs(
    block_size: usize,
    levels: usize,
    quad: &QuadratureSpec,
) -> Result<(SpectrumReport, Vec<EigenPair>), CliError> {
    let opts = EigenSolveOptions::default();
    let even = eigh(&assemble(Parity::Even, block_size, quad)?, &opts)?;
    let odd = eigh(&assemble(Parity::Odd, block_size, quad)?, &opts)?;
    let take = levels.min(block_size);
    let report = merge(&even[..take], &odd[..take], levels)?;
    let (mut ie, mut io) = (0usize, 0usize);
    let mut by_level = Vec::with_capacity(report.levels.len());
    for level in &report.levels {
        let pair = match level.parity {
            Parity::Even => {
                ie += 1;
                even[ie - 1].clone()
            }
            Parity::Odd => {
                io += 1;
                odd[io - 1].clone()
            }
        };
        by_level.push(pair);
    }
    Ok((report, by_level))
}

/// The interleaved analytic diagonal: even k = 0, odd k = 1, even k = 1, …
/// — the "zeroth-order" spectrum before off-diagonal coupling.
pub fn interleaved_diagonal(levels: usize) -> Result<Vec<f64>, CliError> {
    (1..=levels)
        .map(|n| {
            let value = if n % 2 == 1 {
                diagonal_analytic(Parity::Even, (n - 1) / 2)?
            } else {
                diagonal_analytic(Parity::Odd, n / 2)?
            };
            Ok(value)
        })
        .collect()
}

/// Six lowest merged levels at each size (fewer when the block is tiny).
pub fn spectra_at_sizes(
    sizes: &[usize],
    levels: usize,
    quad: &QuadratureSpec,
) -> Result<Vec<(usize, Vec<f64>)>, CliError> {
    sizes
        .iter()
        .map(|&size| {
            let cfg = RunConfig {
                block_size: size,
                parity: ParityChoice::Both,
                levels: levels.min(2 * size),
                quad: *quad,
                output_dir: ".".into(),
                format: crate::config::OutputFormat::Csv,
                threads: None,
            };
            let (report, _) = solve_spectrum(&cfg)?;
            Ok((size, report.levels.iter().map(|l| l.energy).collect()))
        })
        .collect()
}
