//! File formats.
//!
//! Series are CSV: one `#` metadata line carrying `n`, `m`, `gamma` and
//! `source`, a `t,j,p` header, then one row per node per sample. Floats are
//! written with 17 significant digits so a write/read cycle is exact.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::series::{ProbabilitySeries, SeriesMeta, Source};
use crate::{Error, Result};

/// Formats with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn render_series(series: &ProbabilitySeries) -> String {
    let meta = series.meta();
    let mut out = format!(
        "# n={} m={} gamma={} source={}\nt,j,p\n",
        meta.n,
        meta.m,
        fmt_f64(meta.gamma),
        meta.source
    );
    for (t, p) in series.iter() {
        let t = fmt_f64(t);
        for (j, pj) in p.iter().enumerate() {
            out.push_str(&format!("{t},{j},{}\n", fmt_f64(*pj)));
        }
    }
    out
}

pub fn write_series(series: &ProbabilitySeries, path: &Path) -> Result<()> {
    write_text(path, &render_series(series))
}

pub fn read_series(path: &Path) -> Result<ProbabilitySeries> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_series(&text, path)
}

pub fn parse_series(text: &str, path: &Path) -> Result<ProbabilitySeries> {
    let err = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (ln, first) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
    let meta_text = first
        .strip_prefix('#')
        .ok_or_else(|| err(ln, "expected '#' metadata line".into()))?;
    let meta = parse_meta(meta_text).map_err(|msg| err(ln, msg))?;

    let (ln, header) = lines
        .next()
        .ok_or_else(|| err(2, "missing header row".into()))?;
    if header.trim() != "t,j,p" {
        return Err(err(
            ln,
            format!("expected header 't,j,p', found '{header}'"),
        ));
    }

    let mut series = ProbabilitySeries::new(meta);
    let mut current: Option<(f64, Vec<f64>)> = None;
    for (ln, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(err(
                ln,
                format!("expected 3 fields, found {}", fields.len()),
            ));
        }
        let t: f64 = fields[0]
            .trim()
            .parse()
            .map_err(|_| err(ln, format!("bad time '{}'", fields[0])))?;
        let j: usize = fields[1]
            .trim()
            .parse()
            .map_err(|_| err(ln, format!("bad node '{}'", fields[1])))?;
        let p: f64 = fields[2]
            .trim()
            .parse()
            .map_err(|_| err(ln, format!("bad probability '{}'", fields[2])))?;
        if !t.is_finite() || !p.is_finite() {
            return Err(err(ln, "non-finite value".into()));
        }
        let (ct, dist) = current.get_or_insert_with(|| (t, Vec::with_capacity(meta.n)));
        if t != *ct || j != dist.len() {
            return Err(err(
                ln,
                format!("expected node {} of sample t = {ct}", dist.len()),
            ));
        }
        dist.push(p);
        if dist.len() == meta.n {
            let (t, dist) = current.take().expect("sample in progress");
            series
                .try_push(t, dist)
                .map_err(|e| err(ln, e.to_string()))?;
        }
    }
    if let Some((t, dist)) = current {
        return Err(err(
            text.lines().count(),
            format!("sample t = {t} has {} of {} nodes", dist.len(), meta.n),
        ));
    }
    Ok(series)
}

fn parse_meta(text: &str) -> std::result::Result<SeriesMeta, String> {
    let (mut n, mut m, mut gamma, mut source) = (None, None, None, None);
    for kv in text.split_whitespace() {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| format!("malformed metadata '{kv}'"))?;
        let bad = || format!("bad value for {k}: '{v}'");
        match k {
            "n" => n = Some(v.parse::<usize>().map_err(|_| bad())?),
            "m" => m = Some(v.parse::<usize>().map_err(|_| bad())?),
            "gamma" => gamma = Some(v.parse::<f64>().map_err(|_| bad())?),
            "source" => source = Some(v.parse::<Source>().map_err(|_| bad())?),
            _ => return Err(format!("unknown metadata key '{k}'")),
        }
    }
    match (n, m, gamma, source) {
        (Some(n), Some(m), Some(gamma), Some(source)) if n > 0 => Ok(SeriesMeta {
            n,
            m,
            gamma,
            source,
        }),
        _ => Err("metadata must carry n, m, gamma and source".into()),
    }
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    w.write_all(text.as_bytes())
        .map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}
