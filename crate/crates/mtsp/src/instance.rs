//! Problem input model: depot and task coordinates, uniform random
//! generation, and JSON serialization shared by every solver.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A location in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Axis-aligned sampling region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub xmin: f64,
    pub ymin: f64,
    pub xmax: f64,
    pub ymax: f64,
}

impl Region {
    pub fn new(xmin: f64, ymin: f64, xmax: f64, ymax: f64) -> Self {
        Self {
            xmin,
            ymin,
            xmax,
            ymax,
        }
    }

    pub fn width(&self) -> f64 {
        self.xmax - self.xmin
    }

    pub fn height(&self) -> f64 {
        self.ymax - self.ymin
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.xmin && p.x <= self.xmax && p.y >= self.ymin && p.y <= self.ymax
    }

    fn check(&self) -> std::result::Result<(), String> {
        let vals = [self.xmin, self.ymin, self.xmax, self.ymax];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err("region bounds must be finite".to_string());
        }
        if self.width() <= 0.0 || self.height() <= 0.0 {
            return Err(format!(
                "region must have positive extent, got {}x{}",
                self.width(),
                self.height()
            ));
        }
        Ok(())
    }
}

/// The default sampling region, `[0,10] x [0,10]`.
impl Default for Region {
    fn default() -> Self {
        Self::new(0.0, 0.0, 10.0, 10.0)
    }
}

/// An MTSP instance: `k` depots (one per agent) and `n` task locations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub k: usize,
    pub n: usize,
    pub seed: Option<u64>,
    pub region: Option<Region>,
    pub depots: Vec<Point>,
    pub tasks: Vec<Point>,
}

impl Instance {
    /// Hand-built instance without generation metadata.
    pub fn new(depots: Vec<Point>, tasks: Vec<Point>) -> Result<Self> {
        let inst = Self {
            k: depots.len(),
            n: tasks.len(),
            seed: None,
            region: None,
            depots,
            tasks,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        check(self).map_err(Error::InvalidInput)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        read_instance(text.as_bytes())
    }

    pub fn read_from(path: &Path) -> Result<Self> {
        let file = File::open(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        read_instance(BufReader::new(file)).map_err(|e| match e {
            Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        let file = File::create(path)
            .map_err(|e| Error::Io(io::Error::other(format!("{}: {e}", path.display()))))?;
        write_instance(self, BufWriter::new(file))
    }
}

fn check(inst: &Instance) -> std::result::Result<(), String> {
    if inst.depots.is_empty() {
        return Err("depots must be non-empty".to_string());
    }
    if inst.tasks.is_empty() {
        return Err("tasks must be non-empty".to_string());
    }
    if inst.k != inst.depots.len() {
        return Err(format!(
            "k={} does not match depots length {}",
            inst.k,
            inst.depots.len()
        ));
    }
    if inst.n != inst.tasks.len() {
        return Err(format!(
            "n={} does not match tasks length {}",
            inst.n,
            inst.tasks.len()
        ));
    }
    for (i, p) in inst.depots.iter().enumerate() {
        if !p.is_finite() {
            return Err(format!("depots[{i}] is not finite"));
        }
    }
    for (i, p) in inst.tasks.iter().enumerate() {
        if !p.is_finite() {
            return Err(format!("tasks[{i}] is not finite"));
        }
    }
    if let Some(region) = &inst.region {
        region.check()?;
    }
    Ok(())
}

/// One uniform draw from `[0, 1)` using the top 53 bits of the stream.
///
/// The mapping is spelled out here (rather than going through a
/// distribution type) so the generated coordinates are pinned by the
/// ChaCha8 stream alone and reproduce on any implementation of it.
fn unit_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn sample_point(rng: &mut ChaCha8Rng, region: Region) -> Point {
    let x = region.xmin + unit_f64(rng) * region.width();
    let y = region.ymin + unit_f64(rng) * region.height();
    Point::new(x, y)
}

/// Generate an instance by sampling `k` depots and then `n` tasks
/// uniformly over `region`, coordinate order x then y, all from a single
/// ChaCha8 stream seeded with `seed`.
pub fn generate(k: usize, n: usize, region: Region, seed: u64) -> Result<Instance> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".to_string()));
    }
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".to_string()));
    }
    region.check().map_err(Error::InvalidInput)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let depots = (0..k).map(|_| sample_point(&mut rng, region)).collect();
    let tasks = (0..n).map(|_| sample_point(&mut rng, region)).collect();
    Ok(Instance {
        k,
        n,
        seed: Some(seed),
        region: Some(region),
        depots,
        tasks,
    })
}

/// Parse an instance document, validating schema and coordinate finiteness.
pub fn read_instance<R: Read>(src: R) -> Result<Instance> {
    let inst: Instance =
        serde_json::from_reader(src).map_err(|e| Error::Parse(e.to_string()))?;
    check(&inst).map_err(Error::Parse)?;
    Ok(inst)
}

/// Write an instance as pretty JSON. Coordinates use shortest
/// round-trip-exact decimal formatting, so `read(write(x)) == x` bit for bit.
pub fn write_instance<W: Write>(inst: &Instance, mut dest: W) -> Result<()> {
    inst.validate()?;
    dest.write_all(inst.to_json().as_bytes())?;
    dest.write_all(b"\n")?;
    Ok(())
}
