#![no_main]

use libfuzzer_sys::fuzz_target;
use zmeasure::kernels::KernelSpec;
use zmeasure::measures::MeasureSpec;
use zmeasure::partitions::PointConfiguration;
use zmeasure::sampling::SamplerSpec;

fuzz_target!(|data: &[u8]| {
    if let Ok(m) = serde_json::from_slice::<MeasureSpec>(data) {
        let _ = m.validate();
    }
    if let Ok(s) = serde_json::from_slice::<SamplerSpec>(data) {
        let _ = s.validate();
    }
    let _ = serde_json::from_slice::<KernelSpec>(data);
    let _ = serde_json::from_slice::<PointConfiguration>(data);
});
