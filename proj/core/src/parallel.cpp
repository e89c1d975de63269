#include "solab/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>

namespace solab {

namespace {

// Chunk layout depends only on count, never on the number of workers.
constexpr std::size_t kChunk = 4096;

void run_chunks(std::size_t count, const std::function<void(std::size_t)>& chunk_body) {
  const std::size_t chunks = (count + kChunk - 1) / kChunk;
  const unsigned workers = std::min<std::size_t>(worker_count(), chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) chunk_body(c);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t c = w; c < chunks; c += workers) chunk_body(c);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

unsigned worker_count() {
  if (const char* env = std::getenv("SOLAB_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body) {
  run_chunks(count, [&](std::size_t c) {
    body(c * kChunk, std::min(count, (c + 1) * kChunk));
  });
}

double parallel_sum(std::size_t count, const std::function<double(std::size_t, std::size_t)>& body) {
  const std::size_t chunks = (count + kChunk - 1) / kChunk;
  std::vector<double> partial(chunks, 0.0);
  run_chunks(count, [&](std::size_t c) {
    partial[c] = body(c * kChunk, std::min(count, (c + 1) * kChunk));
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace solab
