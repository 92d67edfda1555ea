//! Time series to network toolkit.
//!
//! Series are mapped to graphs with the natural visibility graph (VG), the
//! limited penetrable visibility graph (LPVG) and its circular-arc variant
//! (CLPVG). Graphs can be expanded into first-order subgraph networks (line
//! graphs), embedded with a Weisfeiler-Lehman subtree histogram, reduced with
//! PCA and classified with a random forest.

pub mod classify;
pub mod error;
pub mod features;
pub mod graph;
pub mod io;
pub mod par;
pub mod pipeline;
pub mod signals;
pub mod synth;
pub mod visibility;

pub use error::{Error, Result};
pub use graph::Graph;
pub use par::Execution;
pub use signals::{MultiChannelSignal, TimeSeries};
pub use visibility::{Method, VgParams};
