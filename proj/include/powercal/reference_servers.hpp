#pragma once

// Inventories of three reference servers and the published network efficiency
// fits of two of them.
//
// The published coefficients use R in Mbps and eta in Mbit/J. Converted to the
// library's units (R in bps, eta in bit/J): beta1 is unchanged and
// beta2_si = beta2_published * 1e-6.

#include <optional>
#include <string>
#include <vector>

#include "powercal/types.hpp"

namespace powercal::reference {

inline constexpr double beta2_published_to_si = 1e-6;

struct ServerInventory {
  std::string name;
  int cores = 0;
  std::vector<Hertz> frequencies;
};

inline const std::vector<ServerInventory>& inventories() {
  static const std::vector<ServerInventory> v{
      {"Survivor", 4, {1.2e9, 1.333e9, 1.467e9, 1.6e9, 1.733e9, 1.867e9, 2.0e9, 2.133e9}},
      {"Nemesis",
       4,
       {1.596e9, 1.729e9, 1.862e9, 1.995e9, 2.128e9, 2.261e9, 2.394e9, 2.527e9, 2.666e9, 2.793e9, 2.794e9}},
      {"Erdos", 64, {1.4e9, 1.6e9, 1.8e9, 2.1e9, 2.3e9}},
  };
  return v;
}

inline const ServerInventory& inventory(const std::string& name) {
  for (const auto& s : inventories())
    if (s.name == name) return s;
  throw Error(Errc::invalid_argument, "unknown reference server `" + name + "`");
}

/// One published row, in published units. A missing beta2 means an order-1 model.
struct NetworkFitRow {
  std::string server;
  NetDirection direction = NetDirection::send;
  Bytes packet_size = 0.0;
  Hertz frequency = 0.0;
  double beta1 = 0.0;
  std::optional<double> beta2;
};

namespace detail {

inline void add_rows(std::vector<NetworkFitRow>& out, const std::string& server, NetDirection dir, Bytes size,
                     const std::vector<Hertz>& freqs, const std::vector<double>& b1,
                     const std::vector<double>& b2 = {}) {
  for (std::size_t i = 0; i < freqs.size(); ++i)
    out.push_back({server, dir, size, freqs[i], b1[i], b2.empty() ? std::nullopt : std::optional<double>(b2[i])});
}

}  // namespace detail

inline const std::vector<NetworkFitRow>& published_network_fits() {
  static const std::vector<NetworkFitRow> rows = [] {
    std::vector<NetworkFitRow> r;
    const std::vector<Hertz> sf{1.2e9, 1.6e9, 1.867e9, 2.133e9};
    const std::vector<Hertz> nf{1.596e9, 1.995e9, 2.394e9, 2.794e9};
    const auto rx = NetDirection::receive;
    const auto tx = NetDirection::send;
    using detail::add_rows;

    add_rows(r, "Survivor", rx, 64, sf, {1.751e-2, 1.314e-2, 1.268e-2, 1.254e-2},
             {1.904e-5, 2.160e-5, 1.395e-5, 1.031e-5});
    add_rows(r, "Survivor", rx, 500, sf, {1.736e-2, 1.386e-2, 1.144e-2, 9.962e-3},
             {2.627e-6, 1.595e-6, 2.836e-6, 3.541e-6});
    add_rows(r, "Survivor", rx, 1000, sf, {1.560e-2, 1.296e-2, 1.132e-2, 1.029e-2},
             {3.155e-6, 1.736e-6, 1.080e-6, 1.208e-6});
    add_rows(r, "Survivor", rx, 1470, sf, {1.497e-2, 1.216e-2, 1.073e-2, 2.684e-2},
             {3.231e-6, 4.006e-6, 3.533e-6, -4.746e-6});

    add_rows(r, "Nemesis", rx, 64, nf, {1.491e-2, 1.410e-2, 1.330e-2, 1.227e-2});
    add_rows(r, "Nemesis", rx, 500, nf, {1.565e-2, 1.234e-2, 1.107e-2, 1.074e-2});
    add_rows(r, "Nemesis", rx, 1000, nf, {1.170e-2, 9.451e-3, 7.712e-3, 7.448e-3});
    add_rows(r, "Nemesis", rx, 1470, nf, {1.072e-2, 8.849e-3, 8.207e-3, 8.040e-3});

    add_rows(r, "Survivor", tx, 64, sf, {2.239e-2, 1.802e-2, 1.582e-2, 1.462e-2});
    add_rows(r, "Survivor", tx, 500, sf, {1.742e-2, 1.576e-2, 1.429e-2, 2.205e-2});
    add_rows(r, "Survivor", tx, 1000, sf, {1.784e-2, 1.634e-2, 1.454e-2, 2.230e-2});
    add_rows(r, "Survivor", tx, 1470, sf, {1.801e-2, 1.620e-2, 1.461e-2, 2.369e-2});

    add_rows(r, "Nemesis", tx, 64, nf, {1.642e-2, 1.313e-2, 1.029e-2, 8.625e-3});
    add_rows(r, "Nemesis", tx, 500, nf, {1.599e-2, 1.130e-2, 1.234e-2, 1.014e-2});
    add_rows(r, "Nemesis", tx, 1000, nf, {1.767e-2, 1.781e-2, 1.824e-2, 1.179e-2});
    add_rows(r, "Nemesis", tx, 1470, nf, {1.703e-2, 1.863e-2, 1.279e-2, 1.134e-2});
    return r;
  }();
  return rows;
}

/// The row as a model entry in library units.
inline NetEntry to_net_entry(const NetworkFitRow& row, BitsPerSecond rate_min, BitsPerSecond rate_max) {
  return {row.beta1, row.beta2.value_or(0.0) * beta2_published_to_si, rate_min, rate_max};
}

/// All published rows of one server as a network model over [rate_min, rate_max].
inline NetworkModel published_network_model(const std::string& server, BitsPerSecond rate_min = 1e6,
                                            BitsPerSecond rate_max = 1e9) {
  NetworkModel m;
  for (const auto& row : published_network_fits())
    if (row.server == server)
      m.entries[{row.frequency, row.packet_size, row.direction}] = to_net_entry(row, rate_min, rate_max);
  if (m.empty()) throw Error(Errc::invalid_argument, "no published network fits for `" + server + "`");
  return m;
}

}  // namespace powercal::reference
