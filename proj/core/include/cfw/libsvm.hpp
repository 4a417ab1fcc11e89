#pragma once

#include <memory>
#include <string>

#include "cfw/objectives.hpp"

namespace cfw {

struct LibsvmData {
  Matrix features;
  /// +1 / -1; 0 labels are read as -1.
  Vector labels;
  Index max_index = 0;
};

/// "label idx:val idx:val ..." with 1-based increasing indices; '#' starts a comment.
LibsvmData load_libsvm(const std::string& path);
LibsvmData parse_libsvm(const std::string& text);
void write_libsvm(const std::string& path, const Matrix& features, const Vector& labels);

std::shared_ptr<const LogisticObjective> logistic_from_libsvm(const LibsvmData& data);

}  // namespace cfw
