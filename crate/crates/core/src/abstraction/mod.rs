//! Region-word abstraction: regions, the encoding of configuration sets as
//! words over sets of `(location, region)` pairs, the successor relation on
//! such words and the domination order used to prune the search.

mod region;
mod step;
mod word;

pub use region::{region_of, regions, Region};
pub(crate) use step::{annotated_closure, discrete_moves, start_annotations, Annotated, DelayEvent};
pub use step::{delay_closure, delay_step, discrete_successors, successors};
pub use word::{abstract_h, is_bad_word, preceq, Letter, RegionWord};
