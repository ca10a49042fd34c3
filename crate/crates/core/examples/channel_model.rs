//! Draw a few slots of the channel model and check the user channel's second
//! moment against its expected value `N`.
//!
//! ```text
//! cargo run --release --example channel_model
//! ```

use jcas::channel::{steering_vector, ChannelSampler, SystemParams};

fn main() {
    let params = SystemParams::default();
    let a = steering_vector(params.n_tx, params.theta);
    println!("transmit steering vector (theta = {:.4} rad):", params.theta);
    for (k, x) in a.iter().enumerate() {
        println!("  a[{k}] = {:+.5} {:+.5}i", x.re, x.im);
    }

    let mut sampler = ChannelSampler::new(&params, 42);
    let first = sampler.next_slot();
    println!("||G||_F^2 = {:.6} (rank one, equals ||a||^2 ||b||^2)", first.g.frobenius_norm().powi(2));

    let slots = 20_000;
    let mut sum = first.h.norm_sqr();
    for _ in 1..slots {
        sum += sampler.next_slot().h.norm_sqr();
    }
    println!("mean ||h||^2 over {slots} slots: {:.4} (expected {})", sum / slots as f64, params.n_tx);
}
