//! Dense, memoized triangles of unsigned Stirling numbers of both kinds and
//! Eulerian numbers, with a plain-text on-disk cache.
//!
//! Row `n` of a Stirling triangle holds `k = 0..=n`. Row `n >= 1` of the
//! Eulerian triangle holds `k = 0..n` (the support of the ascent count); row 0
//! is `[1]`.

use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{factorial, rising_factorial};
use crate::scalar::Scalar;

pub const CACHE_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Unsigned Stirling numbers of the first kind (cycle counts).
    Stirling1,
    /// Stirling numbers of the second kind (set partitions).
    Stirling2,
    /// Eulerian numbers (permutations by ascent count).
    Eulerian,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Stirling1, Family::Stirling2, Family::Eulerian];

    pub fn name(self) -> &'static str {
        match self {
            Family::Stirling1 => "stirling1",
            Family::Stirling2 => "stirling2",
            Family::Eulerian => "eulerian",
        }
    }

    fn row_len(self, n: usize) -> usize {
        match self {
            Family::Stirling1 | Family::Stirling2 => n + 1,
            Family::Eulerian => n.max(1),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "stirling1" | "s1" => Ok(Family::Stirling1),
            "stirling2" | "s2" => Ok(Family::Stirling2),
            "eulerian" => Ok(Family::Eulerian),
            _ => Err(Error::param(format!("unknown family {s:?}"))),
        }
    }
}

/// An immutable triangle of one family, rows `0..=max_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangle<T: Scalar> {
    family: Family,
    rows: Vec<Vec<T>>,
}

impl<T: Scalar> Triangle<T> {
    pub fn build(family: Family, max_n: u64) -> Self {
        let max_n = max_n as usize;
        let mut rows: Vec<Vec<T>> = Vec::with_capacity(max_n + 1);
        rows.push(vec![T::one()]);
        for n in 1..=max_n {
            let prev = &rows[n - 1];
            let at = |k: usize| prev.get(k).cloned().unwrap_or_else(T::zero);
            let len = family.row_len(n);
            let mut row = Vec::with_capacity(len);
            for k in 0..len {
                let below = if k == 0 { T::zero() } else { at(k - 1) };
                let v = match family {
                    // s(n,k) = s(n-1,k-1) + (n-1) s(n-1,k)
                    Family::Stirling1 => below + T::from_u64_exact(n as u64 - 1) * at(k),
                    // S(n,k) = S(n-1,k-1) + k S(n-1,k)
                    Family::Stirling2 => below + T::from_u64_exact(k as u64) * at(k),
                    // <n,k> = (k+1)<n-1,k> + (n-k)<n-1,k-1>
                    Family::Eulerian => {
                        T::from_u64_exact(k as u64 + 1) * at(k)
                            + T::from_u64_exact((n - k) as u64) * below
                    }
                };
                row.push(v);
            }
            rows.push(row);
        }
        let tri = Triangle { family, rows };
        #[cfg(debug_assertions)]
        tri.debug_verify();
        tri
    }

    #[cfg(debug_assertions)]
    fn debug_verify(&self) {
        if self.family != Family::Stirling1 {
            return;
        }
        for (n, row) in self.rows.iter().enumerate() {
            for x in [1i64, 2, -3] {
                let x = T::from_i64_exact(x);
                let lhs = row
                    .iter()
                    .rev()
                    .fold(T::zero(), |acc, c| acc * x.clone() + c.clone());
                debug_assert_eq!(lhs, rising_factorial(&x, n as u64), "stirling1 row {n}");
            }
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn max_n(&self) -> u64 {
        (self.rows.len() - 1) as u64
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn row(&self, n: u64) -> Result<&[T]> {
        self.rows
            .get(n as usize)
            .map(Vec::as_slice)
            .ok_or(Error::Capacity {
                requested: n,
                limit: self.max_n(),
            })
    }

    /// Entry `(n, k)`; zero for any `k` outside the row.
    pub fn entry(&self, n: u64, k: i64) -> Result<T> {
        let row = self.row(n)?;
        Ok(usize::try_from(k)
            .ok()
            .and_then(|k| row.get(k).cloned())
            .unwrap_or_else(T::zero))
    }

    /// Keep rows `0..=max_n`.
    pub fn truncated(mut self, max_n: u64) -> Self {
        self.rows.truncate(max_n as usize + 1);
        self
    }

    /// Header line followed by one space-separated row per line.
    pub fn to_cache_string(&self) -> String {
        let header = CacheHeader {
            format_version: CACHE_FORMAT_VERSION,
            family: self.family,
            max_n: self.max_n(),
        };
        let mut out = serde_json::to_string(&header).expect("header serializes");
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parse and fully validate cache text.
    pub fn from_cache_str(text: &str) -> std::result::Result<Self, String> {
        let mut lines = text.lines();
        let header: CacheHeader = lines
            .next()
            .ok_or("empty file")
            .and_then(|h| serde_json::from_str(h).map_err(|_| "unreadable header"))?;
        if header.format_version != CACHE_FORMAT_VERSION {
            return Err(format!("format version {}", header.format_version));
        }
        let mut rows = Vec::new();
        for (n, line) in lines.enumerate() {
            let row = line
                .split(' ')
                .map(T::parse_decimal)
                .collect::<Option<Vec<T>>>()
                .ok_or_else(|| format!("unparsable entry in row {n}"))?;
            if row.len() != header.family.row_len(n) {
                return Err(format!("row {n} has {} entries", row.len()));
            }
            rows.push(row);
        }
        if rows.len() as u64 != header.max_n + 1 {
            return Err(format!(
                "header promises {} rows, file has {}",
                header.max_n + 1,
                rows.len()
            ));
        }
        let tri = Triangle {
            family: header.family,
            rows,
        };
        tri.validate()?;
        Ok(tri)
    }

    /// Row-level invariants used to reject corrupt caches.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let bell = bell_numbers::<T>(self.rows.len());
        for (n, row) in self.rows.iter().enumerate() {
            let fail = |what: &str| Err(format!("{} row {n}: {what}", self.family));
            if row.len() != self.family.row_len(n) {
                return fail("wrong length");
            }
            if row.iter().any(|v| v.is_negative()) {
                return fail("negative entry");
            }
            let sum = row.iter().fold(T::zero(), |acc, v| acc + v.clone());
            match self.family {
                Family::Stirling1 => {
                    if sum != factorial(n as u64) {
                        return fail("row sum is not n!");
                    }
                    if !row[n].is_one() || (n > 0 && !row[0].is_zero()) {
                        return fail("boundary entries");
                    }
                }
                Family::Stirling2 => {
                    if sum != bell[n] {
                        return fail("row sum is not the Bell number");
                    }
                    if !row[n].is_one() || (n > 0 && (!row[0].is_zero() || !row[1].is_one())) {
                        return fail("boundary entries");
                    }
                }
                Family::Eulerian => {
                    if sum != factorial(n as u64) {
                        return fail("row sum is not n!");
                    }
                    if !row[0].is_one() || row.iter().ne(row.iter().rev()) {
                        return fail("not a palindrome starting at 1");
                    }
                }
            }
        }
        Ok(())
    }

    /// Atomically write the cache file (temp file in the same directory, then rename).
    pub fn write_cache(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        let tmp = tmp_path(path);
        let mut file = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
        file.write_all(self.to_cache_string().as_bytes())
            .and_then(|_| file.sync_all())
            .map_err(|e| Error::io(&tmp, e))?;
        fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
    }
}

fn tmp_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(format!(".tmp{}", std::process::id()));
    path.with_file_name(name)
}

/// Bell numbers `B_0..B_{count-1}` via the Aitken array.
fn bell_numbers<T: Scalar>(count: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(count);
    let mut row = vec![T::one()];
    for _ in 0..count {
        out.push(row[0].clone());
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(row.last().cloned().unwrap());
        for v in &row {
            let x = next.last().cloned().unwrap() + v.clone();
            next.push(x);
        }
        row = next;
    }
    out
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheHeader {
    format_version: u32,
    family: Family,
    max_n: u64,
}

/// How a triangle was obtained by [`load_or_build`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CacheOutcome {
    /// Computed from the recurrence (and written, if a path was given).
    Computed,
    /// Read from an existing, compatible cache file.
    Loaded,
    /// The cache file was unusable; recomputed and overwritten.
    Rebuilt { reason: String },
}

pub fn cache_file_name(family: Family, max_n: u64) -> String {
    format!("{family}-{max_n}.tri")
}

/// Return rows `0..=max_n` of `family`, reusing `cache_path` when it holds a
/// valid triangle of the same family with at least that many rows.
pub fn load_or_build<T: Scalar>(
    family: Family,
    max_n: u64,
    cache_path: Option<&Path>,
) -> Result<(Triangle<T>, CacheOutcome)> {
    let Some(path) = cache_path else {
        return Ok((Triangle::build(family, max_n), CacheOutcome::Computed));
    };
    let reason = match fs::read_to_string(path) {
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => None,
        Err(e) => Some(format!("unreadable: {e}")),
        Ok(text) => match Triangle::<T>::from_cache_str(&text) {
            Ok(tri) if tri.family == family && tri.max_n() >= max_n => {
                return Ok((tri.truncated(max_n), CacheOutcome::Loaded));
            }
            Ok(tri) if tri.family != family => Some(format!("holds {} not {family}", tri.family)),
            Ok(_) => None,
            Err(e) => Some(e),
        },
    };
    let tri = Triangle::build(family, max_n);
    tri.write_cache(path)?;
    let outcome = match reason {
        Some(reason) => CacheOutcome::Rebuilt { reason },
        None => CacheOutcome::Computed,
    };
    Ok((tri, outcome))
}

/// The three triangles up to a common row limit.
#[derive(Debug, Clone)]
pub struct Tables<T: Scalar> {
    pub stirling1: Triangle<T>,
    pub stirling2: Triangle<T>,
    pub eulerian: Triangle<T>,
}

impl<T: Scalar> Tables<T> {
    pub fn build(max_n: u64) -> Self {
        Tables {
            stirling1: Triangle::build(Family::Stirling1, max_n),
            stirling2: Triangle::build(Family::Stirling2, max_n),
            eulerian: Triangle::build(Family::Eulerian, max_n),
        }
    }

    /// Load or build all three triangles, caching each under `cache_dir`.
    pub fn load_or_build(
        max_n: u64,
        cache_dir: Option<&Path>,
    ) -> Result<(Self, Vec<(Family, CacheOutcome)>)> {
        let mut outcomes = Vec::new();
        let mut get = |family| -> Result<Triangle<T>> {
            let path = cache_dir.map(|d| d.join(cache_file_name(family, max_n)));
            let (tri, outcome) = load_or_build(family, max_n, path.as_deref())?;
            outcomes.push((family, outcome));
            Ok(tri)
        };
        let tables = Tables {
            stirling1: get(Family::Stirling1)?,
            stirling2: get(Family::Stirling2)?,
            eulerian: get(Family::Eulerian)?,
        };
        Ok((tables, outcomes))
    }

    pub fn max_n(&self) -> u64 {
        self.stirling1.max_n()
    }

    pub fn get(&self, family: Family) -> &Triangle<T> {
        match family {
            Family::Stirling1 => &self.stirling1,
            Family::Stirling2 => &self.stirling2,
            Family::Eulerian => &self.eulerian,
        }
    }

    pub fn stirling1(&self, n: u64, k: i64) -> Result<T> {
        self.stirling1.entry(n, k)
    }

    pub fn stirling2(&self, n: u64, k: i64) -> Result<T> {
        self.stirling2.entry(n, k)
    }

    pub fn eulerian(&self, n: u64, k: i64) -> Result<T> {
        self.eulerian.entry(n, k)
    }

    pub fn ensure_capacity(&self, n: u64) -> Result<()> {
        if n > self.max_n() {
            Err(Error::Capacity {
                requested: n,
                limit: self.max_n(),
            })
        } else {
            Ok(())
        }
    }
}
