#pragma once

#include "rieszfeat/image.hpp"
#include "rieszfeat/riesz.hpp"

namespace rieszfeat {

/// The triple (f, R1 f, R2 f).
struct MonogenicSignal {
  ImageGrid f;
  ImageGrid f1;
  ImageGrid f2;
};

MonogenicSignal monogenic(const ImageGrid& f,
                          const MultiplierCache& cache = default_multiplier_cache());

/// sqrt(f^2 + f1^2 + f2^2) per pixel.
ImageGrid local_amplitude(const MonogenicSignal& m);

/// atan(f2 / f1) per pixel, in (-pi/2, pi/2]. f1 = 0 gives pi/2 (or 0 when f2 = 0 too).
ImageGrid local_orientation(const MonogenicSignal& m);

/// atan(sqrt(f1^2 + f2^2) / f) per pixel, in (-pi/2, pi/2]. The sign follows f;
/// the direction orthogonal to the local orientation is carried by
/// local_orientation. f = 0 gives pi/2, and 0 when f1 = f2 = 0 as well.
ImageGrid local_phase(const MonogenicSignal& m);

}  // namespace rieszfeat
