//! Resumable search state.
//!
//! The checkpoint file is small and rewritten atomically after every chunk.
//! Chunk results go to a companion parts file that is only appended to; a
//! block there counts only once its chunk id appears in the checkpoint's
//! `done` list, so a crash between the two writes loses at most one chunk.
//!
//! ```text
//! stormer-checkpoint 1
//! k=7
//! basis=2,3,5,7
//! chunk=256
//! chunks=1
//! parts=run.ckpt.parts
//! done=0
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::sieve::{SkippedModulus, SolutionRecord};

const HEADER: &str = "stormer-checkpoint 1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    pub bound: u64,
    pub basis: Vec<u64>,
    pub chunk_size: u64,
    pub chunks: u64,
    /// Parts file name, relative to the checkpoint's directory.
    pub parts: String,
    pub done: BTreeSet<u64>,
}

/// Everything one chunk of masks produced.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChunkResult {
    pub id: u64,
    pub records: Vec<SolutionRecord>,
    pub skipped: Vec<SkippedModulus>,
}

fn corrupt(msg: impl Into<String>) -> Error {
    Error::CheckpointCorrupt(msg.into())
}

fn parse_list(s: &str) -> Result<Vec<u64>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|v| v.parse().map_err(|_| corrupt(format!("bad number {v:?}"))))
        .collect()
}

fn join(v: impl IntoIterator<Item = u64>) -> String {
    v.into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl Checkpoint {
    pub fn new(
        bound: u64,
        basis: &[u64],
        chunk_size: u64,
        chunks: u64,
        parts: String,
    ) -> Checkpoint {
        Checkpoint {
            bound,
            basis: basis.to_vec(),
            chunk_size,
            chunks,
            parts,
            done: BTreeSet::new(),
        }
    }

    pub fn to_text(&self) -> String {
        format!(
            "{HEADER}\nk={}\nbasis={}\nchunk={}\nchunks={}\nparts={}\ndone={}\n",
            self.bound,
            join(self.basis.iter().copied()),
            self.chunk_size,
            self.chunks,
            self.parts,
            join(self.done.iter().copied()),
        )
    }

    pub fn parse(text: &str) -> Result<Checkpoint> {
        let mut lines = text.lines();
        if lines.next() != Some(HEADER) {
            return Err(corrupt("missing header"));
        }
        let mut fields = BTreeMap::new();
        for line in lines {
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| corrupt(format!("bad line {line:?}")))?;
            if fields.insert(k, v).is_some() {
                return Err(corrupt(format!("duplicate field {k}")));
            }
        }
        let get = |k: &str| {
            fields
                .get(k)
                .copied()
                .ok_or_else(|| corrupt(format!("missing field {k}")))
        };
        let num = |k: &str| -> Result<u64> {
            let v = get(k)?;
            v.parse()
                .map_err(|_| corrupt(format!("bad value for {k}: {v:?}")))
        };
        let chunks = num("chunks")?;
        let done_list = parse_list(get("done")?)?;
        let done: BTreeSet<u64> = done_list.iter().copied().collect();
        if done.len() != done_list.len() {
            return Err(corrupt("duplicate chunk ids"));
        }
        if done.iter().any(|&c| c >= chunks) {
            return Err(corrupt("chunk id out of range"));
        }
        Ok(Checkpoint {
            bound: num("k")?,
            basis: parse_list(get("basis")?)?,
            chunk_size: num("chunk")?,
            chunks,
            parts: get("parts")?.to_string(),
            done,
        })
    }

    pub fn parts_path(&self, checkpoint: &Path) -> PathBuf {
        checkpoint.with_file_name(&self.parts)
    }

    /// Write the checkpoint through a temporary file and a rename.
    pub fn store(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        {
            let mut f = File::create(&tmp)?;
            f.write_all(self.to_text().as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }

    /// Load a checkpoint and the results of its completed chunks.
    pub fn load(path: &Path) -> Result<(Checkpoint, Vec<ChunkResult>)> {
        let ck = Checkpoint::parse(&fs::read_to_string(path)?)?;
        let parts_path = ck.parts_path(path);
        let text = match fs::read_to_string(&parts_path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound && ck.done.is_empty() => {
                String::new()
            }
            Err(e) => return Err(corrupt(format!("parts file {}: {e}", parts_path.display()))),
        };
        let mut blocks = parse_parts(&text)?;
        let mut out = Vec::with_capacity(ck.done.len());
        for id in &ck.done {
            let block = blocks
                .remove(id)
                .ok_or_else(|| corrupt(format!("no results stored for completed chunk {id}")))?;
            out.push(block);
        }
        Ok((ck, out))
    }
}

/// Complete blocks of a parts file, keyed by chunk id (the last complete
/// block wins). A torn trailing block is ignored.
fn parse_parts(text: &str) -> Result<BTreeMap<u64, ChunkResult>> {
    let mut out = BTreeMap::new();
    let mut cur: Option<Vec<&str>> = None;
    let mut cur_id = 0;
    for line in text.lines() {
        if let Some(id) = line.strip_prefix("chunk=") {
            cur_id = id
                .parse()
                .map_err(|_| corrupt(format!("bad chunk line {line:?}")))?;
            cur = Some(Vec::new());
        } else if line == "end" {
            let body = cur
                .take()
                .ok_or_else(|| corrupt("block end without start"))?;
            let mut block = ChunkResult {
                id: cur_id,
                ..ChunkResult::default()
            };
            for l in body {
                if l.starts_with("skip ") {
                    block
                        .skipped
                        .push(SkippedModulus::from_line(l).map_err(corrupt)?);
                } else {
                    block
                        .records
                        .push(SolutionRecord::from_line(l).map_err(corrupt)?);
                }
            }
            out.insert(cur_id, block);
        } else {
            cur.as_mut()
                .ok_or_else(|| corrupt(format!("line outside a block: {line:?}")))?
                .push(line);
        }
    }
    Ok(out)
}

/// Append one chunk's block to the parts file and flush it to disk.
pub fn append_chunk(parts: &Path, chunk: &ChunkResult) -> Result<()> {
    let mut text = format!("chunk={}\n", chunk.id);
    for r in &chunk.records {
        text.push_str(&r.to_line());
        text.push('\n');
    }
    for s in &chunk.skipped {
        text.push_str(&s.to_line());
        text.push('\n');
    }
    text.push_str("end\n");
    let mut f = OpenOptions::new().create(true).append(true).open(parts)?;
    f.write_all(text.as_bytes())?;
    f.sync_all()?;
    Ok(())
}
