//! Internet-radio event metadata: stream monitoring, library matching, a
//! five-table corpus, and the aggregations behind the exploration dashboard.

pub mod analysis;
pub mod clock;
pub mod domain;
pub mod matcher;
pub mod monitor;
pub mod sim;
pub mod store;
