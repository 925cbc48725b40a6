//! Shared synthesis entry used by `synth` and `bench`.

use std::time::Instant;

use skolem_core::engine::TimeSource;

/// Wall-clock time source backing the core's cooperative timeouts.
pub struct WallClock(Instant);

impl WallClock {
    pub fn new() -> WallClock {
        WallClock(Instant::now())
    }
}

impl Default for WallClock {
    fn default() -> Self {
        Self::new()
    }
}

impl TimeSource for WallClock {
    fn elapsed_ms(&self) -> u64 {
        self.0.elapsed().as_millis() as u64
    }
}

/// Variable names for debug dumps: inputs and outputs by their position in
/// the declaration (`x1`, `y3`), auxiliaries by id (`a17`).
pub fn namer(spec: &skolem_core::Spec) -> impl Fn(skolem_core::Var) -> String + '_ {
    move |v| {
        if let Some(i) = spec.inputs().iter().position(|&x| x == v) {
            format!("x{}", i + 1)
        } else if let Some(i) = spec.outputs().iter().position(|&y| y == v) {
            format!("y{}", i + 1)
        } else {
            format!("a{}", v.id())
        }
    }
}
