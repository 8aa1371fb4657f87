#include "fmp/instance.hpp"

#include "fmp/error.hpp"
#include "text.hpp"

#include <sstream>

namespace fmp {

namespace {

std::string trim(const std::string &s) {
  size_t b = s.find_first_not_of(" \t\r");
  size_t e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

} // namespace

InstanceRecord parse_instance(std::istream &in) {
  InstanceRecord record;
  bool have_v = false, have_c = false;
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    std::string line = trim(raw);
    if (line.empty() || line == "c" || line.rfind("c ", 0) == 0)
      continue;
    if (line.rfind("v:", 0) == 0) {
      if (have_v)
        throw ParseError(ParseIssue::Malformed, number, "second 'v:' line");
      std::stringstream values(line.substr(2));
      std::string token;
      while (std::getline(values, token, ','))
        record.values.push_back(trim(token));
      if (record.values.empty() ||
          (record.values.size() == 1 && record.values[0].empty()))
        throw ParseError(ParseIssue::Malformed, number, "empty value list");
      for (const auto &v : record.values)
        if (v.empty())
          throw ParseError(ParseIssue::Malformed, number, "empty value in list");
      have_v = true;
    } else if (line.rfind("c:", 0) == 0) {
      if (have_c)
        throw ParseError(ParseIssue::Malformed, number, "second 'c:' line");
      record.prediction = trim(line.substr(2));
      if (record.prediction.empty())
        throw ParseError(ParseIssue::Malformed, number, "empty class");
      have_c = true;
    } else {
      throw ParseError(ParseIssue::Malformed, number,
                       "expected 'v: ...' or 'c: ...'");
    }
  }
  if (!have_v || !have_c)
    throw ParseError(ParseIssue::Malformed, 0,
                     "instance needs one 'v:' line and one 'c:' line");
  return record;
}

InstanceRecord parse_instance_string(const std::string &text) {
  std::istringstream in(text);
  return parse_instance(in);
}

Instance bind_boolean(const InstanceRecord &record, int num_features) {
  if (static_cast<int>(record.values.size()) != num_features)
    throw Error(ErrorCode::InvalidArgument,
                "instance has " + std::to_string(record.values.size()) +
                    " values, classifier has " + std::to_string(num_features) +
                    " features");
  Instance inst;
  for (const auto &v : record.values) {
    if (v != "0" && v != "1")
      throw ParseError(ParseIssue::BadValue, 0,
                       "boolean feature value must be 0 or 1, got '" + v + "'");
    inst.point.push_back(v == "1");
  }
  inst.prediction = text::to_int(record.prediction, 0);
  return inst;
}

std::string serialize_instance(const Instance &instance) {
  std::string out = "v: ";
  for (size_t i = 0; i < instance.point.size(); ++i) {
    if (i)
      out += ',';
    out += std::to_string(instance.point[i]);
  }
  out += "\nc: " + std::to_string(instance.prediction) + "\n";
  return out;
}

} // namespace fmp
