//! JSON run statistics (`--stats`) and the per-iteration repair trace.

use serde::Serialize;
use skolem_core::engine::{RunStats, TraceEvent};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct StatsJson {
    pub schema: u32,
    pub instance: String,
    pub status: String,
    pub input_unsat: bool,
    pub unates: u32,
    pub unique: u32,
    pub learned: u32,
    pub repaired: u32,
    pub self_substituted: u32,
    pub repair_rounds: u64,
    pub repairs_performed: u64,
    pub self_sub_events: u64,
    pub followup_additions: u64,
    pub lex_escalations: u64,
    pub extraction_skipped: u32,
    pub samples_drawn: usize,
    pub chunk_count: usize,
    pub phase_ms: PhaseJson,
}

#[derive(Serialize)]
pub struct PhaseJson {
    pub preprocess: u64,
    pub sampling: u64,
    pub learning: u64,
    pub repair: u64,
    pub ground: u64,
    pub total: u64,
}

pub fn stats_json(instance: &str, stats: &RunStats) -> StatsJson {
    StatsJson {
        schema: SCHEMA_VERSION,
        instance: instance.to_string(),
        status: stats.status.as_str().to_string(),
        input_unsat: stats.input_unsat,
        unates: stats.unates,
        unique: stats.unique,
        learned: stats.learned,
        repaired: stats.repaired,
        self_substituted: stats.self_substituted,
        repair_rounds: stats.repair_rounds,
        repairs_performed: stats.repairs_performed,
        self_sub_events: stats.self_sub_events,
        followup_additions: stats.followup_additions,
        lex_escalations: stats.lex_escalations,
        extraction_skipped: stats.extraction_skipped,
        samples_drawn: stats.samples_drawn,
        chunk_count: stats.chunk_count,
        phase_ms: PhaseJson {
            preprocess: stats.phase.preprocess_ms,
            sampling: stats.phase.sampling_ms,
            learning: stats.phase.learning_ms,
            repair: stats.phase.repair_ms,
            ground: stats.phase.ground_ms,
            total: stats.phase.total_ms,
        },
    }
}

#[derive(Serialize)]
pub struct TraceJson {
    pub round: u64,
    pub cex_size: usize,
    pub ind_len: usize,
    pub mode: String,
    pub repaired: Vec<String>,
    pub self_substituted: Vec<String>,
}

/// One JSON object per line, one line per repair round.
pub fn trace_jsonl(trace: &[TraceEvent]) -> String {
    let mut out = String::new();
    for ev in trace {
        let t = TraceJson {
            round: ev.round,
            cex_size: ev.cex_size,
            ind_len: ev.ind_len,
            mode: if ev.lex_mode { "lex" } else { "plain" }.to_string(),
            repaired: ev.repaired.iter().map(|v| v.to_string()).collect(),
            self_substituted: ev.self_substituted.iter().map(|v| v.to_string()).collect(),
        };
        out.push_str(&serde_json::to_string(&t).expect("trace serializes"));
        out.push('\n');
    }
    out
}
