use std::fmt;
use std::time::Instant;

/// Wall-clock time spent in one named stage.
#[derive(Debug, Clone, PartialEq)]
pub struct StageTiming {
    pub name: String,
    pub millis: f64,
}

/// Per-stage timings and solver diagnostics for one image.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PipelineReport {
    pub stages: Vec<StageTiming>,
    pub solver_iterations: usize,
    pub solver_residual: f64,
    pub image_dims: (usize, usize),
}

impl PipelineReport {
    pub fn new(image_dims: (usize, usize)) -> Self {
        PipelineReport {
            image_dims,
            ..Default::default()
        }
    }

    pub fn record(&mut self, name: &str, millis: f64) {
        self.stages.push(StageTiming {
            name: name.to_string(),
            millis: millis.max(0.0),
        });
    }

    /// Runs `f`, recording its duration under `name`.
    pub fn time<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.record(name, start.elapsed().as_secs_f64() * 1e3);
        out
    }

    pub fn stage_names(&self) -> Vec<&str> {
        self.stages.iter().map(|s| s.name.as_str()).collect()
    }

    pub fn total_millis(&self) -> f64 {
        self.stages.iter().map(|s| s.millis).sum()
    }

    pub fn millis_of(&self, stage: &str) -> Option<f64> {
        self.stages
            .iter()
            .find(|s| s.name == stage)
            .map(|s| s.millis)
    }
}

impl fmt::Display for PipelineReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (h, w) = self.image_dims;
        writeln!(f, "image {h}x{w}")?;
        writeln!(f, "{:<16} {:>10}", "stage", "ms")?;
        for s in &self.stages {
            writeln!(f, "{:<16} {:>10.1}", s.name, s.millis)?;
        }
        writeln!(f, "{:<16} {:>10.1}", "total", self.total_millis())?;
        write!(
            f,
            "solver: {} iterations, relative residual {:.3e}",
            self.solver_iterations, self.solver_residual
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_in_order() {
        let mut r = PipelineReport::new((2, 3));
        let v = r.time("a", || 41 + 1);
        r.record("b", 2.5);
        assert_eq!(v, 42);
        assert_eq!(r.stage_names(), vec!["a", "b"]);
        assert!(r.millis_of("a").unwrap() >= 0.0);
        let text = r.to_string();
        assert!(text.contains("image 2x3"));
        assert!(text
            .lines()
            .any(|l| l.starts_with('b') && l.ends_with(" 2.5")));
    }
}
