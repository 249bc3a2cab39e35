#include <charconv>
#include <cmath>
#include <string_view>

#include "pmin/core_maps.hpp"

namespace pmin {

namespace {

[[noreturn]] void bad_label(const std::string& label, const std::string& why) {
  throw Error(ErrorCode::unknown_label,
              "cannot parse map label '" + label + "': " + why);
}

double parse_double(std::string_view text, const std::string& label) {
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() ||
      !std::isfinite(v)) {
    bad_label(label, "'" + std::string(text) + "' is not a number");
  }
  return v;
}

int parse_int(std::string_view text, const std::string& label) {
  int v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    bad_label(label, "'" + std::string(text) + "' is not an integer");
  }
  return v;
}

std::pair<int, int> parse_plane(std::string_view text,
                                const std::string& label) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) {
    bad_label(label, "plane must be written as i,j");
  }
  return {parse_int(text.substr(0, comma), label),
          parse_int(text.substr(comma + 1), label)};
}

}  // namespace

SphereMap map_from_label(const std::string& label, int n) {
  std::string_view rest(label);
  const auto head_end = rest.find(':');
  const std::string_view kind = rest.substr(0, head_end);
  rest = head_end == std::string_view::npos ? std::string_view{}
                                            : rest.substr(head_end + 1);

  double t = 0.0;
  double eps = 0.1;
  std::pair<int, int> plane{0, 1};
  bool plane_set = false;
  std::string field = "const";
  int axis = n - 1;
  std::string base_label;

  while (!rest.empty()) {
    const auto eq = rest.find('=');
    if (eq == std::string_view::npos) {
      bad_label(label, "expected key=value, got '" + std::string(rest) + "'");
    }
    const std::string_view key = rest.substr(0, eq);
    rest = rest.substr(eq + 1);
    if (key == "base") {
      base_label = std::string(rest);
      break;
    }
    const auto next = rest.find(':');
    const std::string_view value = rest.substr(0, next);
    rest = next == std::string_view::npos ? std::string_view{}
                                          : rest.substr(next + 1);
    if (key == "t") {
      t = parse_double(value, label);
    } else if (key == "eps") {
      eps = parse_double(value, label);
    } else if (key == "plane") {
      plane = parse_plane(value, label);
      plane_set = true;
    } else if (key == "field") {
      field = std::string(value);
    } else if (key == "axis") {
      axis = parse_int(value, label);
    } else {
      bad_label(label, "unknown key '" + std::string(key) + "'");
    }
  }

  if (kind == "radial") {
    return radial_projection(n);
  }
  if (kind == "rotation") {
    return rotation_family(n, t, plane);
  }
  if (kind == "perturb") {
    const SphereMap base =
        base_label.empty() ? radial_projection(n) : map_from_label(base_label, n);
    if (field == "const") {
      return perturbation_family(base, constant_field(n, axis), eps);
    }
    if (field == "swirl") {
      const auto swirl_plane = plane_set ? plane : std::pair<int, int>{0, n - 1};
      return perturbation_family(
          base, swirl_field(n, swirl_plane.first, swirl_plane.second), eps);
    }
    bad_label(label, "unknown field '" + field + "'");
  }
  bad_label(label, "unknown map kind '" + std::string(kind) + "'");
}

}  // namespace pmin
