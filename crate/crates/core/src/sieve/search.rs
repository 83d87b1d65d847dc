use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::mpsc;
use std::thread;

use num_bigint::BigInt;

use super::{scan_d, SearchConfig, SearchStats, SkippedModulus, SolutionRecord};
use crate::checkpoint::{append_chunk, Checkpoint, ChunkResult};
use crate::corollaries::SolutionSet;
use crate::error::{Error, Result};
use crate::smooth::{gen_basis, SmoothBasis};

/// A finished (or deliberately interrupted) search.
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub set: SolutionSet,
    /// Moduli that were not scanned; must be empty for a complete set.
    pub skipped: Vec<SkippedModulus>,
    /// Counters for the chunks scanned by this invocation.
    pub stats: SearchStats,
    pub chunks_done: u64,
    pub chunks_total: u64,
}

fn chunk_masks(id: u64, chunk_size: u64, total: u64) -> std::ops::RangeInclusive<u64> {
    let lo = id * chunk_size + 1;
    let hi = ((id + 1) * chunk_size).min(total);
    lo..=hi
}

fn scan_chunk(
    id: u64,
    config: &SearchConfig,
    basis: &SmoothBasis,
    total: u64,
) -> Result<(ChunkResult, SearchStats)> {
    let mut chunk = ChunkResult {
        id,
        ..ChunkResult::default()
    };
    let mut stats = SearchStats::default();
    for mask in chunk_masks(id, config.chunk_size, total) {
        let d = basis.subset_product(mask);
        let scan = scan_d(&d, config, basis)?;
        chunk.records.extend(scan.records);
        chunk.skipped.extend(scan.skipped);
        stats.merge(&scan.stats);
    }
    Ok((chunk, stats))
}

/// Open or create the checkpoint, returning it with the chunks it already
/// holds.
fn open_checkpoint(
    path: &Path,
    config: &SearchConfig,
    basis: &SmoothBasis,
    chunks: u64,
) -> Result<(Checkpoint, Vec<ChunkResult>)> {
    let fresh = || {
        let name = format!(
            "{}.parts",
            path.file_name()
                .map(|s| s.to_string_lossy())
                .unwrap_or_default()
        );
        Checkpoint::new(
            config.bound,
            basis.primes(),
            config.chunk_size,
            chunks,
            name,
        )
    };
    if path.exists() {
        if config.restart {
            if let Ok(text) = fs::read_to_string(path) {
                if let Ok(old) = Checkpoint::parse(&text) {
                    let _ = fs::remove_file(old.parts_path(path));
                }
            }
            fs::remove_file(path)?;
        } else if config.resume {
            let (ck, blocks) = Checkpoint::load(path)?;
            if ck.bound != config.bound || ck.basis != basis.primes() {
                return Err(Error::CheckpointMismatch(format!(
                    "checkpoint is for K={} with basis {:?}",
                    ck.bound, ck.basis
                )));
            }
            if ck.chunk_size != config.chunk_size || ck.chunks != chunks {
                return Err(Error::CheckpointMismatch(format!(
                    "checkpoint uses chunks of {} masks",
                    ck.chunk_size
                )));
            }
            return Ok((ck, blocks));
        } else {
            return Err(Error::Config(format!(
                "checkpoint {} exists; resume it or restart explicitly",
                path.display()
            )));
        }
    }
    let ck = fresh();
    let _ = fs::remove_file(ck.parts_path(path));
    ck.store(path)?;
    Ok((ck, Vec::new()))
}

/// Scan every nonempty subset of the basis primes.
///
/// Chunks of consecutive masks are handed to `worker_count` threads; a
/// single writer merges results and, when a checkpoint path is set, records
/// each finished chunk before acknowledging it.
pub fn run_search(config: &SearchConfig) -> Result<SearchOutcome> {
    let basis = gen_basis(config.bound)?;
    config.validate(&basis)?;
    let total = (1u64 << basis.len()) - 1;
    let chunks = total.div_ceil(config.chunk_size);

    let mut ck = match &config.checkpoint_path {
        Some(path) => Some(open_checkpoint(path, config, &basis, chunks)?),
        None => None,
    };
    let mut done: Vec<ChunkResult> = ck
        .as_mut()
        .map(|(_, b)| std::mem::take(b))
        .unwrap_or_default();
    let already: std::collections::BTreeSet<u64> = done.iter().map(|c| c.id).collect();
    let pending: Vec<u64> = (0..chunks).filter(|c| !already.contains(c)).collect();

    let next = AtomicUsize::new(0);
    let abort = AtomicBool::new(false);
    let mut stats = SearchStats::default();
    let mut failure = None;
    let mut newly = 0usize;
    thread::scope(|s| {
        let (tx, rx) = mpsc::channel();
        for _ in 0..config.worker_count.min(pending.len().max(1)) {
            let tx = tx.clone();
            let (next, abort, pending, basis) = (&next, &abort, &pending, &basis);
            s.spawn(move || {
                while !abort.load(Ordering::Relaxed) {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    let Some(&id) = pending.get(i) else { break };
                    let r = scan_chunk(id, config, basis, total);
                    if tx.send(r).is_err() {
                        break;
                    }
                }
            });
        }
        drop(tx);
        while let Ok(r) = rx.recv() {
            let step = r.and_then(|(chunk, st)| {
                if let (Some((c, _)), Some(path)) = (ck.as_mut(), &config.checkpoint_path) {
                    append_chunk(&c.parts_path(path), &chunk)?;
                    c.done.insert(chunk.id);
                    c.store(path)?;
                }
                stats.merge(&st);
                done.push(chunk);
                Ok(())
            });
            if let Err(e) = step {
                failure = Some(e);
                abort.store(true, Ordering::Relaxed);
                break;
            }
            newly += 1;
            if config.stop_after_chunks.is_some_and(|n| newly >= n) {
                abort.store(true, Ordering::Relaxed);
                break;
            }
        }
        drop(rx);
    });
    if let Some(e) = failure {
        return Err(e);
    }

    let chunks_done = done.len() as u64;
    let mut by_x: BTreeMap<BigInt, SolutionRecord> = BTreeMap::new();
    let mut skipped = Vec::new();
    for chunk in done {
        for r in chunk.records {
            if let Some(prev) = by_x.get(&r.x) {
                if prev != &r {
                    return Err(Error::InternalLimit(format!(
                        "x={} found with two provenances (d={} and d={})",
                        r.x, prev.d, r.d
                    )));
                }
            }
            by_x.insert(r.x.clone(), r);
        }
        skipped.extend(chunk.skipped);
    }
    skipped.sort_by(|a, b| a.d.cmp(&b.d));
    let complete = skipped.is_empty() && chunks_done == chunks;
    Ok(SearchOutcome {
        set: SolutionSet::new(by_x.into_values().collect(), basis, complete)?,
        skipped,
        stats,
        chunks_done,
        chunks_total: chunks,
    })
}
