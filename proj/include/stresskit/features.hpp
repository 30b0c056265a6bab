#pragma once

#include <iosfwd>
#include <vector>

#include "stresskit/types.hpp"

namespace stresskit {

// sqrt(ax^2 + ay^2 + az^2): the scalar magnitude of one acceleration
// sample. Batch work goes through kernels::magnitude3.
double acc_magnitude(double ax, double ay, double az);

// The ten time-domain features over one window. Acceleration statistics
// are computed over per-sample magnitudes; std uses the n-1 divisor and
// is 0 for a single sample. The window must have passed coverage_filter
// (>= 1 sample); an empty window is a contract violation.
FeatureVector featurize(const Window& window);

std::vector<FeatureVector> featurize_all(const std::vector<Window>& windows);

// Feature matrix CSV. Header:
//   participant_id,label,mean_hr,max_hr,min_hr,std_hr,range_hr,
//   mean_acc,max_acc,min_acc,std_acc,range_acc
// label is 1 for stress, 0 for non-stress.
void write_feature_csv(const std::vector<FeatureVector>& rows,
                       std::ostream& out);
std::vector<FeatureVector> read_feature_csv(std::istream& in);

}  // namespace stresskit
