//! On-disk cache for enumerated groups and their conjugacy classes.
//!
//! A group file holds one element per line as its eight residues; a class file
//! holds one class id per line, in the same order. Both start with `#` header
//! lines recording the schema version and the key `(p, ε, N, label)`.

use super::classes::ConjClasses;
use super::level::Level;
use super::matrix::Mat2;
use super::subgroup::SubgroupTable;
use super::table::GroupTable;
use crate::error::{Error, Result};
use crate::ring::RingCtx;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

pub const CACHE_ENV: &str = "UNIBRANCH_CACHE_DIR";
const SCHEMA: &str = "unibranch-cache 1";

/// The cache root: an explicit path, else `$UNIBRANCH_CACHE_DIR`, else `.unibranch-cache`.
pub fn cache_root(explicit: Option<&Path>) -> PathBuf {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(".unibranch-cache"))
}

fn key_dir(root: &Path, ctx: &RingCtx) -> PathBuf {
    root.join(format!("p{}-e{}-n{}", ctx.p(), ctx.eps(), ctx.level()))
}

fn key_line(ctx: &RingCtx, label: &str) -> String {
    format!(
        "# p={} eps={} level={} label={}",
        ctx.p(),
        ctx.eps(),
        ctx.level(),
        label
    )
}

fn io_err(e: std::io::Error) -> Error {
    Error::Cache(e.to_string())
}

/// Write through a temporary file in the same directory, then rename.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().expect("cache paths have a parent");
    fs::create_dir_all(dir).map_err(io_err)?;
    let tmp = dir.join(format!(
        ".{}.tmp{}",
        path.file_name().unwrap().to_string_lossy(),
        std::process::id()
    ));
    fs::write(&tmp, contents).map_err(io_err)?;
    fs::rename(&tmp, path).map_err(io_err)
}

fn read_body<'a>(text: &'a str, ctx: &RingCtx, label: &str) -> Result<impl Iterator<Item = &'a str>> {
    let mut lines = text.lines();
    if lines.next() != Some(&format!("# {SCHEMA}")[..]) {
        return Err(Error::Cache("unknown schema".into()));
    }
    if lines.next() != Some(&key_line(ctx, label)[..]) {
        return Err(Error::Cache(format!("key mismatch for {label}")));
    }
    Ok(lines.filter(|l| !l.starts_with('#')))
}

pub fn group_path(root: &Path, ctx: &RingCtx, label: &str) -> PathBuf {
    key_dir(root, ctx).join(format!("{label}.group"))
}

pub fn classes_path(root: &Path, ctx: &RingCtx, label: &str) -> PathBuf {
    key_dir(root, ctx).join(format!("{label}.classes"))
}

pub fn save_group(root: &Path, group: &GroupTable) -> Result<PathBuf> {
    let ctx = group.ctx();
    let mut s = format!("# {SCHEMA}\n{}\n", key_line(ctx, group.label()));
    let gens: Vec<String> = group.gens().iter().map(u32::to_string).collect();
    let _ = writeln!(s, "# order={} gens={}", group.order(), gens.join(","));
    for g in group.elements() {
        let r = g.residues().map(|x| x.to_string());
        s.push_str(&r.join(" "));
        s.push('\n');
    }
    let path = group_path(root, ctx, group.label());
    write_atomic(&path, &s)?;
    Ok(path)
}

pub fn load_group(root: &Path, ctx: &RingCtx, label: &str) -> Result<Option<GroupTable>> {
    let path = group_path(root, ctx, label);
    let Ok(text) = fs::read_to_string(&path) else {
        return Ok(None);
    };
    let gens = text
        .lines()
        .find_map(|l| l.strip_prefix("# order=").and_then(|r| r.split_once(" gens=")))
        .ok_or_else(|| Error::Cache("missing generator line".into()))?
        .1
        .split(',')
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<u32>().map_err(|e| Error::Cache(e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    let mut elems = Vec::new();
    for line in read_body(&text, ctx, label)? {
        let vals: Vec<u32> = line
            .split_whitespace()
            .map(|x| x.parse().map_err(|_| Error::Cache(format!("bad residue in {line:?}"))))
            .collect::<Result<_>>()?;
        let r: [u32; 8] = vals
            .try_into()
            .map_err(|_| Error::Cache(format!("expected 8 residues in {line:?}")))?;
        if r.iter().any(|&x| x as u64 >= ctx.modulus()) {
            return Err(Error::Cache(format!("residue out of range in {line:?}")));
        }
        elems.push(Mat2::from_residues(r));
    }
    GroupTable::from_elements(ctx, label, elems, gens).map(Some)
}

pub fn save_classes(root: &Path, classes: &ConjClasses) -> Result<PathBuf> {
    let sub = classes.subgroup();
    let ctx = sub.parent().ctx();
    let mut s = format!("# {SCHEMA}\n{}\n", key_line(ctx, sub.label()));
    let _ = writeln!(s, "# order={} classes={}", sub.order(), classes.count());
    for id in classes.class_ids() {
        let _ = writeln!(s, "{id}");
    }
    let path = classes_path(root, ctx, sub.label());
    write_atomic(&path, &s)?;
    Ok(path)
}

pub fn load_classes(root: &Path, sub: &Arc<SubgroupTable>) -> Result<Option<ConjClasses>> {
    let ctx = sub.parent().ctx();
    let Ok(text) = fs::read_to_string(classes_path(root, ctx, sub.label())) else {
        return Ok(None);
    };
    let ids = read_body(&text, ctx, sub.label())?
        .map(|l| l.trim().parse::<u32>().map_err(|e| Error::Cache(e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    ConjClasses::from_class_ids(sub, &ids).map(Some)
}

impl Level {
    /// Load `K/K_N` and its classes from the cache, enumerating and storing them on a miss.
    pub fn cached(ctx: &RingCtx, budget: u64, root: &Path) -> Result<Level> {
        let table = match load_group(root, ctx, super::K_LABEL)? {
            Some(t) => t,
            None => {
                let t = super::enumerate_k(ctx, budget)?;
                save_group(root, &t)?;
                t
            }
        };
        let level = Level::from_table(Arc::new(table));
        let classes = match load_classes(root, level.full())? {
            Some(c) => c,
            None => {
                let c = ConjClasses::compute(level.full());
                save_classes(root, &c)?;
                c
            }
        };
        Ok(level.with_classes(Arc::new(classes)))
    }
}
