//! Runs the HTTP service on the demo grammar.
//!
//! ```text
//! cargo run --example serve -- 8080
//! curl -s localhost:8080/analyze -d '{"text":"The boy happy."}'
//! curl -s localhost:8080/reparse -d '{"sentence":"The boy is happy."}'
//! curl -s localhost:8080/health
//! ```

use std::net::SocketAddr;

use malparse::service::{serve, AppState};
use malparse::{AnalyzeOptions, Grammar};

#[tokio::main]
async fn main() -> std::io::Result<()> {
    let port: u16 = std::env::args().nth(1).and_then(|p| p.parse().ok()).unwrap_or(8080);
    let state = AppState::pending("demo", AnalyzeOptions::default());
    let loader = state.clone();
    // /health answers 503 until this finishes
    tokio::task::spawn_blocking(move || loader.set_grammar(Grammar::demo()));
    let addr = SocketAddr::from(([127, 0, 0, 1], port));
    println!("listening on http://{addr}");
    serve(addr, state).await
}
