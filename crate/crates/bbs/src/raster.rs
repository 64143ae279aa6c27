//! Space-time rasters: row `t` shows `T^t` of the initial window.

use std::fmt::Write as _;

use bbs_core::BallConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageFormat {
    Pbm,
    Pgm,
}

impl std::str::FromStr for ImageFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "pbm" => Ok(ImageFormat::Pbm),
            "pgm" => Ok(ImageFormat::Pgm),
            _ => Err(format!("unknown image format {s:?} (expected pbm or pgm)")),
        }
    }
}

impl ImageFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ImageFormat::Pbm => "pbm",
            ImageFormat::Pgm => "pgm",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    cells: Vec<bool>,
    overlay: Vec<bool>,
}

impl Raster {
    pub fn new(width: usize, height: usize) -> Self {
        Raster {
            width,
            height,
            cells: vec![false; width * height],
            overlay: vec![false; width * height],
        }
    }

    /// `steps` rows starting from `initial`, clipped to its width.
    pub fn evolve(initial: &BallConfig, steps: usize) -> Self {
        let width = initial.len();
        let mut r = Raster::new(width, steps);
        let mut c = initial.clone();
        for t in 0..steps {
            for x in 0..width {
                r.cells[t * width + x] = c.get(x as i64);
            }
            if t + 1 < steps {
                c = c.apply_t();
            }
        }
        r
    }

    pub fn get(&self, x: usize, t: usize) -> bool {
        self.cells[t * self.width + x]
    }

    pub fn set(&mut self, x: usize, t: usize, ball: bool) {
        self.cells[t * self.width + x] = ball;
    }

    pub fn is_overlay(&self, x: usize, t: usize) -> bool {
        self.overlay[t * self.width + x]
    }

    pub fn row(&self, t: usize) -> &[bool] {
        &self.cells[t * self.width..(t + 1) * self.width]
    }

    fn mark(&mut self, x: i64, t: i64) {
        if x >= 0 && t >= 0 && (x as usize) < self.width && (t as usize) < self.height {
            self.overlay[t as usize * self.width + x as usize] = true;
        }
    }

    /// Integer line from `(x0, t0)` to `(x1, t1)`; off-raster cells are dropped.
    pub fn line(&mut self, (x0, t0): (i64, i64), (x1, t1): (i64, i64)) {
        let dx = (x1 - x0).abs();
        let dy = -(t1 - t0).abs();
        let sx = if x0 < x1 { 1 } else { -1 };
        let sy = if t0 < t1 { 1 } else { -1 };
        let (mut x, mut y, mut e) = (x0, t0, dx + dy);
        loop {
            self.mark(x, y);
            if x == x1 && y == t1 {
                break;
            }
            let e2 = 2 * e;
            if e2 >= dy {
                e += dy;
                x += sx;
            }
            if e2 <= dx {
                e += dx;
                y += sy;
            }
        }
    }

    /// Segment leaving `(x0, 0)` with slope `v` sites per step.
    pub fn slope_line(&mut self, x0: i64, v: f64) {
        if self.height == 0 {
            return;
        }
        let t1 = self.height as i64 - 1;
        let x1 = x0 + (v * t1 as f64).round() as i64;
        self.line((x0, 0), (x1, t1));
    }

    pub fn render(&self, format: ImageFormat, repeat: usize) -> String {
        let repeat = repeat.max(1);
        let mut out = String::new();
        let h = self.height * repeat;
        match format {
            ImageFormat::Pbm => writeln!(out, "P1\n{} {}", self.width, h).unwrap(),
            ImageFormat::Pgm => writeln!(out, "P2\n{} {}\n255", self.width, h).unwrap(),
        }
        for t in 0..self.height {
            let mut line = String::new();
            for x in 0..self.width {
                match format {
                    ImageFormat::Pbm => line.push(if self.get(x, t) { '1' } else { '0' }),
                    ImageFormat::Pgm => {
                        if x > 0 {
                            line.push(' ');
                        }
                        line.push_str(if self.get(x, t) {
                            "0"
                        } else if self.is_overlay(x, t) {
                            "128"
                        } else {
                            "255"
                        });
                    }
                }
            }
            line.push('\n');
            for _ in 0..repeat {
                out.push_str(&line);
            }
        }
        out
    }
}
