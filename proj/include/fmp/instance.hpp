#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fmp {

/// A point of feature space plus the class the classifier assigns to it.
/// Boolean features hold 0/1; multi-valued features hold a domain index.
struct Instance {
  std::vector<int> point;
  int prediction = 0;

  int num_features() const { return static_cast<int>(point.size()); }
};

/// Instance file contents before they are bound to a classifier's domains:
///   v: <x1>,...,<xm>
///   c: <class>
struct InstanceRecord {
  std::vector<std::string> values;
  std::string prediction;
};

InstanceRecord parse_instance(std::istream &in);
InstanceRecord parse_instance_string(const std::string &text);

/// Binds a record whose values are all `0`/`1` and whose class is an integer.
Instance bind_boolean(const InstanceRecord &record, int num_features);

std::string serialize_instance(const Instance &instance);

} // namespace fmp
