#include "critset/taskfarm.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

namespace critset {

std::vector<WorkBatch> make_batches(std::size_t grid_count, std::size_t batch_size) {
  if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  std::vector<WorkBatch> out;
  for (std::size_t s = 0; s < grid_count; s += batch_size)
    out.push_back({out.size(), s, std::min(grid_count, s + batch_size), WorkBatch::Status::kPending});
  return out;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FarmError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string catalogue_digest(const std::string& path) {
  const std::string data = read_file(path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::to_string(data.size()) + "-" + buf;
}

std::string format_checkpoint(const Checkpoint& cp) {
  std::ostringstream out;
  out << "catalog " << cp.digest << " k " << cp.k << " batches " << cp.batch_count << '\n';
  for (auto id : cp.done) out << "done " << id << '\n';
  return out.str();
}

Checkpoint parse_checkpoint(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Checkpoint cp;
  if (!std::getline(in, line)) throw FarmError("empty checkpoint");
  {
    std::istringstream h(line);
    std::string w1, w3, w5;
    if (!(h >> w1 >> cp.digest >> w3 >> cp.k >> w5 >> cp.batch_count) || w1 != "catalog" || w3 != "k" ||
        w5 != "batches")
      throw FarmError("malformed checkpoint header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream l(line);
    std::string w;
    std::size_t id = 0;
    if (!(l >> w >> id) || w != "done") throw FarmError("malformed checkpoint line: " + line);
    if (id >= cp.batch_count) throw FarmError("checkpoint names an unknown batch");
    cp.done.insert(id);
  }
  return cp;
}

void write_checkpoint_atomic(const std::string& path, const Checkpoint& cp) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FarmError("cannot write " + tmp);
    out << format_checkpoint(cp);
    out.flush();
    if (!out) throw FarmError("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

namespace {

template <typename T>
class Channel {
 public:
  void send(T v) {
    {
      std::lock_guard lock(m_);
      q_.push_back(std::move(v));
    }
    cv_.notify_one();
  }
  T receive() {
    std::unique_lock lock(m_);
    cv_.wait(lock, [&] { return !q_.empty(); });
    T v = std::move(q_.front());
    q_.pop_front();
    return v;
  }
  std::optional<T> receive_until(std::chrono::steady_clock::time_point deadline) {
    std::unique_lock lock(m_);
    if (!cv_.wait_until(lock, deadline, [&] { return !q_.empty(); })) return std::nullopt;
    T v = std::move(q_.front());
    q_.pop_front();
    return v;
  }

 private:
  std::mutex m_;
  std::condition_variable cv_;
  std::deque<T> q_;
};

struct GridLine {
  std::size_t line_no;
  std::string text;
};

struct Assignment {
  bool stop = false;
  std::size_t batch_id = 0;
  std::vector<GridLine> lines;
};

struct Result {
  std::size_t worker = 0;
  std::size_t batch_id = 0;
  bool ok = false;
  bool abandoned = false;
  std::size_t searched = 0;
  std::vector<std::string> records;
};

struct Worker {
  std::thread thread;
  Channel<Assignment> inbox;
};

class Farm {
 public:
  explicit Farm(const FarmOptions& o) : o_(o) {}

  ~Farm() { shutdown(); }

  FarmSummary run() {
    if (o_.workers < 1) throw std::invalid_argument("workers must be >= 1");
    load_catalogue();
    batches_ = make_batches(lines_.size(), o_.batch_size);
    summary_.batches_total = batches_.size();
    open_checkpoint();

    std::deque<std::size_t> pending;
    for (auto& b : batches_) {
      if (cp_.done.count(b.batch_id)) {
        b.status = WorkBatch::Status::kDone;
        ++summary_.batches_already_done;
      } else {
        pending.push_back(b.batch_id);
      }
    }

    std::size_t n = o_.workers;
    if (o_.respect_env)
      if (const char* env = std::getenv("CHECKER_THREADS")) {
        long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) n = std::min(n, static_cast<std::size_t>(cap));
      }
    n = std::max<std::size_t>(1, std::min(n, std::max<std::size_t>(1, pending.size())));
    summary_.workers_used = n;

    terminate_torn_tail();
    out_.open(o_.output_path, std::ios::binary | std::ios::app);
    if (!out_) throw FarmError("cannot open output " + o_.output_path);

    workers_.reserve(n);
    for (std::size_t w = 0; w < n; ++w) workers_.push_back(std::make_unique<Worker>());
    for (std::size_t w = 0; w < n; ++w) workers_[w]->thread = std::thread([this, w] { work(w); });

    std::size_t in_flight = 0;
    auto dispatch = [&](std::size_t w) {
      if (pending.empty()) {
        workers_[w]->inbox.send({true, 0, {}});
        return;
      }
      auto id = pending.front();
      pending.pop_front();
      auto& b = batches_[id];
      b.status = WorkBatch::Status::kInFlight;
      std::vector<GridLine> lines(lines_.begin() + static_cast<std::ptrdiff_t>(b.start),
                                  lines_.begin() + static_cast<std::ptrdiff_t>(b.end));
      workers_[w]->inbox.send({false, id, std::move(lines)});
      ++in_flight;
    };
    for (std::size_t w = 0; w < n; ++w) dispatch(w);

    const auto deadline = o_.time_budget_s
                              ? std::chrono::steady_clock::now() +
                                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                        std::chrono::duration<double>(*o_.time_budget_s))
                              : std::chrono::steady_clock::time_point{};
    bool expired = false;
    while (in_flight > 0) {
      std::optional<Result> msg;
      if (!expired) msg = o_.time_budget_s ? results_.receive_until(deadline) : results_.receive();
      if (!msg && !expired) {
        expired = true;
        cancel_ = true;
        continue;
      }
      if (!msg) msg = results_.receive();
      Result& r = *msg;
      --in_flight;
      summary_.grids_searched += r.searched;
      auto& b = batches_[r.batch_id];
      if (r.ok && !expired) {
        record(r);
        b.status = WorkBatch::Status::kDone;
      } else {
        if (r.abandoned || expired) ++summary_.batches_abandoned;
        else ++summary_.worker_failures;
        b.status = WorkBatch::Status::kPending;
        if (!expired) pending.push_front(r.batch_id);
      }
      if (expired) workers_[r.worker]->inbox.send({true, 0, {}});
      else dispatch(r.worker);
    }
    shutdown();
    summary_.finished = cp_.done.size() == batches_.size();
    return summary_;
  }

 private:
  void load_catalogue() {
    std::ifstream in(o_.catalogue_path);
    if (!in) throw FarmError("cannot read catalogue " + o_.catalogue_path);
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
      ++no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      lines_.push_back({no, line});
    }
  }

  void open_checkpoint() {
    const std::string digest = catalogue_digest(o_.catalogue_path);
    if (std::filesystem::exists(o_.checkpoint_path)) {
      cp_ = parse_checkpoint(read_file(o_.checkpoint_path));
      if (cp_.digest != digest) throw FarmError("checkpoint belongs to a different catalogue (digest mismatch)");
      if (cp_.k != o_.k) throw FarmError("checkpoint was written for a different k");
      if (cp_.batch_count != batches_.size()) throw FarmError("checkpoint batch count does not match");
    } else {
      cp_ = {digest, o_.k, batches_.size(), {}};
      // A fresh run starts a fresh output file.
      std::ofstream(o_.output_path, std::ios::binary | std::ios::trunc);
      write_checkpoint_atomic(o_.checkpoint_path, cp_);
    }
  }

  // A record torn mid-line must not swallow the next BEGIN line.
  void terminate_torn_tail() {
    std::ifstream in(o_.output_path, std::ios::binary | std::ios::ate);
    if (!in || in.tellg() <= 0) return;
    in.seekg(-1, std::ios::end);
    char last = 0;
    in.get(last);
    in.close();
    if (last != '\n') std::ofstream(o_.output_path, std::ios::binary | std::ios::app) << '\n';
  }

  void kill(const char* where) {
    shutdown();
    throw FarmKilled(std::string("injected kill ") + where);
  }

  void record(const Result& r) {
    ++recorded_;
    const bool kill_here = o_.fault.kill_at_record && *o_.fault.kill_at_record == recorded_;
    std::ostringstream rec;
    rec << "BEGIN " << r.batch_id << ' ' << r.records.size() << '\n';
    for (const auto& s : r.records) rec << s;
    const std::string body = rec.str();
    if (kill_here && o_.fault.point == FaultInjection::Point::kTornRecord) {
      out_ << body.substr(0, body.size() / 2);
      out_.flush();
      kill("mid-record");
    }
    out_ << body << "END " << r.batch_id << '\n';
    out_.flush();
    if (!out_) throw FarmError("write failed: " + o_.output_path);
    if (kill_here && o_.fault.point == FaultInjection::Point::kBeforeCheckpoint) kill("before checkpoint");
    cp_.done.insert(r.batch_id);
    write_checkpoint_atomic(o_.checkpoint_path, cp_);
    ++summary_.batches_recorded;
    if (kill_here && o_.fault.point == FaultInjection::Point::kAfterCheckpoint) kill("after checkpoint");
  }

  void work(std::size_t w) {
    for (;;) {
      Assignment a = workers_[w]->inbox.receive();
      if (a.stop) return;
      Result r;
      r.worker = w;
      r.batch_id = a.batch_id;
      try {
        for (const auto& gl : a.lines) {
          if (cancel_) {
            r.abandoned = true;
            break;
          }
          if (o_.fault.fail_batch_once && *o_.fault.fail_batch_once == a.batch_id && !failed_once_.exchange(true))
            throw std::runtime_error("injected worker failure");
          CatalogRecord rec;
          rec.line_no = gl.line_no;
          try {
            Grid g = parse_grid(gl.text);
            SearchConfig cfg = o_.config_for ? o_.config_for(g.shape()) : SearchConfig::defaults_for(g.shape(), o_.k);
            rec.report = search_grid(g, o_.k, cfg);
          } catch (const GridError& e) {
            rec.error = e.what();
          }
          ++r.searched;
          r.records.push_back(format_record(rec));
        }
        r.ok = !r.abandoned;
      } catch (const std::exception&) {
        r.ok = false;
      }
      results_.send(std::move(r));
    }
  }

  void shutdown() {
    if (workers_.empty()) return;
    cancel_ = true;
    for (auto& w : workers_) w->inbox.send({true, 0, {}});
    for (auto& w : workers_)
      if (w->thread.joinable()) w->thread.join();
    workers_.clear();
  }

  const FarmOptions& o_;
  std::vector<GridLine> lines_;
  std::vector<WorkBatch> batches_;
  Checkpoint cp_;
  std::ofstream out_;
  std::vector<std::unique_ptr<Worker>> workers_;
  Channel<Result> results_;
  std::atomic<bool> cancel_{false};
  std::atomic<bool> failed_once_{false};
  std::size_t recorded_ = 0;
  FarmSummary summary_;
};

}  // namespace

FarmSummary run_farm(const FarmOptions& options) {
  Farm farm(options);
  return farm.run();
}

std::string stable_record(const std::string& grid_record) {
  auto nl = grid_record.find('\n');
  std::string head = grid_record.substr(0, nl);
  std::string rest = nl == std::string::npos ? "" : grid_record.substr(nl);
  if (head.rfind("error\t", 0) == 0) return grid_record;
  std::vector<std::string> fields;
  std::size_t pos = 0;
  for (;;) {
    auto tab = head.find('\t', pos);
    fields.push_back(head.substr(pos, tab - pos));
    if (tab == std::string::npos) break;
    pos = tab + 1;
  }
  if (fields.size() >= 6) fields[5] = "-";
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) out += (i ? "\t" : "") + fields[i];
  return out + rest;
}

std::vector<MergedRecord> merge_outputs(const std::string& output_path) {
  std::istringstream in(read_file(output_path));
  std::map<std::size_t, MergedRecord> merged;
  std::string line;
  std::optional<MergedRecord> cur;
  std::size_t expected = 0;
  auto finish_grid = [](MergedRecord& m, const std::string& l) {
    if (!l.empty() && l.front() == '\t' && !m.grid_records.empty()) m.grid_records.back() += l + '\n';
    else m.grid_records.push_back(l + '\n');
  };
  while (std::getline(in, line)) {
    if (line.rfind("BEGIN ", 0) == 0) {
      // An unterminated record before this one was torn.
      std::istringstream h(line.substr(6));
      MergedRecord m;
      if (h >> m.batch_id >> expected) cur = std::move(m);
      else cur.reset();
      continue;
    }
    if (line.rfind("END ", 0) == 0) {
      std::size_t id = 0;
      std::istringstream h(line.substr(4));
      if (cur && (h >> id) && id == cur->batch_id && cur->grid_records.size() == expected) {
        auto it = merged.find(id);
        if (it != merged.end()) {
          bool same = it->second.grid_records.size() == cur->grid_records.size();
          for (std::size_t i = 0; same && i < cur->grid_records.size(); ++i)
            same = stable_record(it->second.grid_records[i]) == stable_record(cur->grid_records[i]);
          if (!same) throw FarmError("conflicting records for batch " + std::to_string(id));
          it->second = std::move(*cur);
        } else {
          merged.emplace(id, std::move(*cur));
        }
      }
      cur.reset();
      continue;
    }
    if (cur) finish_grid(*cur, line);
  }
  std::vector<MergedRecord> out;
  out.reserve(merged.size());
  for (auto& [id, m] : merged) out.push_back(std::move(m));
  return out;
}

}  // namespace critset
