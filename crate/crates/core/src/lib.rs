//! Localized color-spanning object queries: given a k-colored point set,
//! preprocess it so that for a query point q the smallest color-spanning
//! interval / axis-parallel square / rectangle / fixed-orientation
//! equilateral triangle containing q can be reported, plus a
//! (1+epsilon)-approximate smallest color-spanning circle.

pub mod answer;
pub mod dataset;
pub mod error;
pub mod geom;
pub mod index;
pub mod oracle;
pub mod scsc_circles;
pub mod scsc_envelope;
pub mod scsi;
pub mod scsr;
pub mod scss;
pub mod scst;

pub use answer::{min_answer, Geometry, Provenance, QueryAnswer};
pub use dataset::{load_csv, parse_csv, Dataset};
pub use error::{Error, Result};
pub use geom::{Circle, ColoredPoint, Point, Triangle};
