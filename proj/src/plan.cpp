#include "patternpress/plan.hpp"

#include <algorithm>
#include <memory>
#include <optional>
#include <sstream>

#include "patternpress/codecs/ans.hpp"
#include "patternpress/codecs/bitpack.hpp"
#include "patternpress/codecs/delta.hpp"
#include "patternpress/codecs/dict.hpp"
#include "patternpress/codecs/registry.hpp"

namespace patternpress {

using namespace codecs;

std::string_view to_string(StepKind kind) noexcept {
  switch (kind) {
    case StepKind::Load: return "Load";
    case StepKind::FullyParallel: return "FullyParallel";
    case StepKind::Scan: return "Scan";
    case StepKind::GroupParallel: return "GroupParallel";
    case StepKind::NonParallel: return "NonParallel";
    case StepKind::Assemble: return "Assemble";
  }
  return "?";
}

namespace {

bool is_compute(StepKind k) {
  return k == StepKind::FullyParallel || k == StepKind::Scan || k == StepKind::GroupParallel ||
         k == StepKind::NonParallel;
}

void expect_type(CodecId id, ElementType t, bool ok, std::string_view wanted) {
  if (!ok) {
    throw Error(ErrorCode::TypeMismatch, std::string(codec_info(id).name) + " cannot produce " + to_string(t) +
                                             " (it decodes to " + std::string(wanted) + ")");
  }
}

class PlanBuilder {
 public:
  explicit PlanBuilder(const CompressedArtifact& a) : a_(a) {}

  DecodePlan build() {
    plan_.type = a_.original_type;
    plan_.count = a_.original_count;
    if (a_.original_type.kind == ElementKind::VarBytes && a_.root.codec == CodecId::Raw) {
      const auto raw = load(a_.original_type, a_.original_count);
      PlanStep s;
      s.kind = StepKind::Assemble;
      s.label = "raw.strings";
      s.inputs = {raw};
      s.fusable = {false};
      s.out_count = a_.original_count;
      s.out_elem_bytes = 0;
      plan_.result = add(std::move(s));
    } else {
      plan_.result = node(a_.root, a_.original_type, a_.original_count);
    }
    return std::move(plan_);
  }

 private:
  std::size_t add(PlanStep s) {
    s.output = plan_.slot_count++;
    plan_.steps.push_back(std::move(s));
    return plan_.steps.back().output;
  }

  std::size_t load(ElementType type, std::uint64_t count) {
    PlanStep s;
    s.kind = StepKind::Load;
    s.label = "load";
    s.stream_index = next_stream_++;
    s.load_type = type;
    s.out_count = count;
    s.out_elem_bytes = type.fixed_width();
    return add(std::move(s));
  }

  std::size_t scan(std::string label, std::size_t input, std::uint64_t n, ScanMode mode, std::int64_t init,
                   std::optional<std::uint64_t> expected_total) {
    PlanStep s;
    s.kind = StepKind::Scan;
    s.label = std::move(label);
    s.inputs = {input};
    s.fusable = {true};
    s.scan_mode = mode;
    s.scan_init = init;
    s.scan_expected_total = expected_total;
    s.out_count = mode == ScanMode::Exclusive ? n + 1 : n;
    s.out_elem_bytes = 8;
    return add(std::move(s));
  }

  std::size_t node(const CodecNode& n, ElementType type, std::uint64_t count) {
    const auto int64 = ElementType::int64();
    const auto bytes = ElementType::fixed_bytes(1);
    switch (n.codec) {
      case CodecId::Raw:
        expect_type(n.codec, type, type.is_fixed(), "fixed-width elements below the root");
        return load(type, count);

      case CodecId::BitPack: {
        expect_type(n.codec, type, type == int64, "Int64");
        const auto p = BitPackParams::from_record(n.params);
        const auto packed = node(n.children[0], bytes, packed_size(count, p.bit_width));
        PlanStep s;
        s.kind = StepKind::FullyParallel;
        s.label = "bitpack.unpack";
        s.inputs = {packed};
        s.fusable = {true};
        s.out_count = count;
        s.fp = [p, count](std::span<const Operand> ops) { return bitpack_map(ops[0], p, count); };
        s.fp_words = [p, count](std::span<const Operand> ops) { return bitpack_words(ops[0], p, count); };
        return add(std::move(s));
      }

      case CodecId::Delta: {
        expect_type(n.codec, type, type == int64, "Int64");
        const auto p = DeltaParams::from_record(n.params);
        const auto deltas = node(n.children[0], int64, count);
        return scan("delta.scan", deltas, count, ScanMode::Inclusive, p.base, std::nullopt);
      }

      case CodecId::RLE:
      case CodecId::DeltaStride: {
        expect_type(n.codec, type, type == int64, "Int64");
        const auto p = RleParams::from_record(n.params);
        const bool rle = n.codec == CodecId::RLE;
        const auto values = node(n.children[0], int64, p.n_runs);
        const auto counts = node(n.children[1], int64, p.n_runs);
        std::optional<std::size_t> strides;
        if (!rle) strides = node(n.children[2], int64, p.n_runs);
        const auto offsets = scan(rle ? "rle.offsets" : "deltastride.offsets", counts, p.n_runs,
                                  ScanMode::Exclusive, 0, count);
        PlanStep s;
        s.kind = StepKind::GroupParallel;
        s.label = rle ? "rle.expand" : "deltastride.expand";
        s.inputs = {offsets, values};
        s.fusable = {false, true};
        if (rle) {
          s.gp = [](std::span<const Operand> ops) { return rle_emit(ops[1]); };
        } else {
          s.inputs.push_back(*strides);
          s.fusable.push_back(true);
          s.gp = [](std::span<const Operand> ops) { return deltastride_emit(ops[1], ops[2]); };
        }
        s.out_count = count;
        return add(std::move(s));
      }

      case CodecId::Dict: {
        expect_type(n.codec, type, type.is_fixed(), "fixed-width elements");
        const auto p = DictParams::from_record(n.params);
        const auto dict = node(n.children[0], type, p.dict_count);
        const auto indices = node(n.children[1], int64, count);
        PlanStep s;
        s.kind = StepKind::FullyParallel;
        s.label = "dict.lookup";
        s.inputs = {dict, indices};
        s.fusable = {type.fixed_width() <= 8, true};
        s.non_compressing = true;
        s.out_count = count;
        s.out_elem_bytes = type.fixed_width();
        s.fp = [](std::span<const Operand> ops) { return dict_map(ops[0], ops[1]); };
        return add(std::move(s));
      }

      case CodecId::Float2Int: {
        expect_type(n.codec, type, type == ElementType::float64(), "Float64");
        const auto p = Float2IntParams::from_record(n.params);
        const auto ints = node(n.children[0], int64, count);
        PlanStep s;
        s.kind = StepKind::FullyParallel;
        s.label = "float2int.scale";
        s.inputs = {ints};
        s.fusable = {true};
        s.non_compressing = true;
        s.out_count = count;
        s.fp = [p](std::span<const Operand> ops) { return float2int_map(ops[0], p); };
        return add(std::move(s));
      }

      case CodecId::StrDict: {
        expect_type(n.codec, type, type.kind == ElementKind::VarBytes, "VarBytes");
        auto params = std::make_shared<const StrDictParams>(StrDictParams::from_record(n.params));
        auto table = std::make_shared<const TokenTable>(*params);
        const auto occ = params->occurrences;
        const auto indices = node(n.children[0], int64, occ);
        const auto counts = node(n.children[1], int64, count);

        PlanStep len;
        len.kind = StepKind::FullyParallel;
        len.label = "strdict.lengths";
        len.inputs = {indices};
        len.fusable = {true};
        len.out_count = occ;
        len.fp = [table](std::span<const Operand> ops) { return strdict_length_map(table, ops[0]); };
        const auto lengths = add(std::move(len));
        const auto byte_offsets = scan("strdict.byte_offsets", lengths, occ, ScanMode::Exclusive, 0, std::nullopt);

        PlanStep expand;
        expand.kind = StepKind::GroupParallel;
        expand.label = "strdict.expand";
        expand.inputs = {byte_offsets, indices};
        expand.fusable = {false, true};
        expand.out_elem_bytes = 1;
        expand.out_count = 0;  // known once the byte offsets are scanned
        expand.gp = [table](std::span<const Operand> ops) { return strdict_emit(table, ops[1]); };
        const auto payload = add(std::move(expand));

        const auto token_offsets =
            scan("strdict.token_offsets", counts, count, ScanMode::Exclusive, 0, occ);
        PlanStep gather;
        gather.kind = StepKind::FullyParallel;
        gather.label = "strdict.string_offsets";
        gather.inputs = {token_offsets, byte_offsets};
        gather.fusable = {true, true};
        gather.out_count = count + 1;
        gather.fp = [](std::span<const Operand> ops) { return strdict_string_offset_map(ops[0], ops[1]); };
        const auto string_offsets = add(std::move(gather));

        PlanStep done;
        done.kind = StepKind::Assemble;
        done.label = "strdict.assemble";
        done.inputs = {string_offsets, payload};
        done.fusable = {false, false};
        done.out_count = count;
        done.out_elem_bytes = 0;
        return add(std::move(done));
      }

      case CodecId::ANS: {
        expect_type(n.codec, type, type.is_fixed(), "fixed-width elements");
        const auto p = AnsParams::from_record(n.params);
        if (p.input_size != count * type.fixed_width()) {
          throw Error(ErrorCode::DecodeError, "ANS input size " + std::to_string(p.input_size) + " does not match " +
                                                  std::to_string(count) + " x " + to_string(type));
        }
        const auto payload_size = p.chunk_offsets.empty() ? 0 : p.chunk_offsets.back();
        const auto payload = node(n.children[0], bytes, payload_size);
        PlanStep s;
        s.kind = StepKind::NonParallel;
        s.label = "ans.decode";
        s.inputs = {payload};
        s.fusable = {false};
        s.out_count = count;
        s.out_elem_bytes = type.fixed_width();
        s.np = [p](std::span<const Operand> ops) { return ans_decode_plan(ops[0].bytes(), p); };
        return add(std::move(s));
      }
    }
    throw Error(ErrorCode::BadTag, "unknown codec");
  }

  const CompressedArtifact& a_;
  DecodePlan plan_;
  std::size_t next_stream_ = 0;
};

// ---- fusion -------------------------------------------------------------------

struct Use {
  std::size_t step;
  std::size_t pos;
};

std::vector<Use> uses_of(const DecodePlan& plan, std::size_t slot) {
  std::vector<Use> out;
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const auto& in = plan.steps[i].inputs;
    for (std::size_t k = 0; k < in.size(); ++k) {
      if (in[k] == slot) out.push_back({i, k});
    }
  }
  return out;
}

bool can_absorb(const DecodePlan& plan, const PlanStep& producer, const std::vector<Use>& uses) {
  if (producer.kind != StepKind::FullyParallel || producer.output == plan.result) return false;
  if (producer.out_elem_bytes == 0 || producer.out_elem_bytes > 8 || uses.empty()) return false;
  return std::all_of(uses.begin(), uses.end(), [&](const Use& u) {
    const auto& c = plan.steps[u.step];
    const bool kind_ok = c.kind == StepKind::FullyParallel || c.kind == StepKind::GroupParallel ||
                         c.kind == StepKind::Scan;
    return kind_ok && c.fusable[u.pos];
  });
}

// Replaces consumer input `pos` by the producer's inputs and evaluates the
// producer lazily inside the consumer.
void absorb(const PlanStep& producer, PlanStep& consumer, std::size_t pos) {
  const auto np = producer.inputs.size();
  consumer.inputs.erase(consumer.inputs.begin() + static_cast<std::ptrdiff_t>(pos));
  consumer.inputs.insert(consumer.inputs.begin() + static_cast<std::ptrdiff_t>(pos), producer.inputs.begin(),
                         producer.inputs.end());
  consumer.fusable.erase(consumer.fusable.begin() + static_cast<std::ptrdiff_t>(pos));
  consumer.fusable.insert(consumer.fusable.begin() + static_cast<std::ptrdiff_t>(pos), producer.fusable.begin(),
                          producer.fusable.end());

  consumer.adapt = [p_adapt = producer.adapt, p_fp = producer.fp, p_words = producer.fp_words,
                    count = producer.out_count, eb = producer.out_elem_bytes, c_adapt = consumer.adapt, pos,
                    np](std::span<const Operand> raw) {
    std::vector<Operand> p_raw(raw.begin() + static_cast<std::ptrdiff_t>(pos),
                               raw.begin() + static_cast<std::ptrdiff_t>(pos + np));
    const auto p_ops = p_adapt ? p_adapt(p_raw) : p_raw;
    WordReader reader;
    if (p_words) {
      reader = p_words(p_ops);
    } else {
      reader = [map = p_fp(p_ops), eb](std::uint64_t i) {
        std::uint8_t buf[8] = {};
        map(i, buf);
        return load_word(buf, eb);
      };
    }
    auto lazy = Operand::lazy(std::move(reader), eb, count);
    std::vector<Operand> mid(raw.begin(), raw.begin() + static_cast<std::ptrdiff_t>(pos));
    mid.push_back(std::move(lazy));
    mid.insert(mid.end(), raw.begin() + static_cast<std::ptrdiff_t>(pos + np), raw.end());
    return c_adapt ? c_adapt(mid) : mid;
  };

  std::vector<std::string> labels = producer.absorbed;
  labels.push_back(producer.label);
  labels.insert(labels.end(), consumer.absorbed.begin(), consumer.absorbed.end());
  consumer.absorbed = std::move(labels);
}

// ---- execution ------------------------------------------------------------------

struct Slot {
  std::vector<std::uint64_t> store;  // 8-byte aligned backing
  ByteSpan bytes;
  std::size_t elem_bytes = 8;
  std::uint64_t count = 0;

  std::span<std::uint8_t> allocate(std::size_t n_bytes) {
    store.assign((n_bytes + 7) / 8, 0);
    auto* p = reinterpret_cast<std::uint8_t*>(store.data());
    bytes = {p, n_bytes};
    return {p, n_bytes};
  }
  void release() {
    store = {};
    bytes = {};
  }
  Operand operand() const { return Operand::buffer(bytes, elem_bytes, count); }
};

std::vector<std::uint64_t> read_u64s(ByteSpan b, std::size_t n) {
  std::vector<std::uint64_t> v(n);
  if (n != 0) std::memcpy(v.data(), b.data(), n * 8);
  return v;
}

TypedColumn strings_from(std::vector<std::uint64_t> offsets, Bytes payload, std::uint64_t count) {
  try {
    return TypedColumn(ElementType::var_bytes(), count, std::move(payload), std::move(offsets));
  } catch (const Error& e) {
    throw Error(ErrorCode::DecodeError, std::string("decoded strings are malformed: ") + e.what());
  }
}

class Executor {
 public:
  Executor(const DecodePlan& plan, const CompressedArtifact& a, const VirtualDevice& dev,
           const ExecutionConfig& cfg)
      : plan_(plan), a_(a), dev_(dev), cfg_(cfg), slots_(plan.slot_count), last_use_(plan.slot_count, 0) {
    for (std::size_t i = 0; i < plan.steps.size(); ++i) {
      for (auto in : plan.steps[i].inputs) last_use_[in] = i;
    }
  }

  TypedColumn run() {
    std::optional<TypedColumn> strings;
    for (std::size_t i = 0; i < plan_.steps.size(); ++i) {
      const auto& step = plan_.steps[i];
      try {
        if (step.kind == StepKind::Assemble) {
          strings = assemble(step);
        } else {
          execute(step);
        }
      } catch (const Error& e) {
        throw e.with_context("step " + std::to_string(i) + " (" + step.label + ")");
      }
      for (auto in : step.inputs) {
        if (last_use_[in] == i && in != plan_.result) slots_[in].release();
      }
    }
    if (strings) return std::move(*strings);
    const auto& r = slots_[plan_.result];
    if (r.bytes.size() != plan_.count * plan_.type.fixed_width()) {
      throw Error(ErrorCode::DecodeError, "decoded size does not match the column header");
    }
    return TypedColumn(plan_.type, plan_.count, Bytes(r.bytes.begin(), r.bytes.end()));
  }

 private:
  std::vector<Operand> operands(const PlanStep& step) const {
    std::vector<Operand> raw;
    raw.reserve(step.inputs.size());
    for (auto in : step.inputs) raw.push_back(slots_[in].operand());
    if (!step.adapt) return raw;
    return step.adapt(raw);
  }

  void execute(const PlanStep& step) {
    auto& out = slots_[step.output];
    switch (step.kind) {
      case StepKind::Load: {
        if (step.stream_index >= a_.streams.size()) throw Error(ErrorCode::ArityMismatch, "missing stream");
        const auto& bytes = a_.streams[step.stream_index].bytes;
        if (step.load_type.kind == ElementKind::VarBytes) {
          out.bytes = bytes;  // parsed by the assemble step
          out.elem_bytes = 1;
          out.count = bytes.size();
          return;
        }
        const auto want = step.out_count * step.out_elem_bytes;
        if (bytes.size() != want) {
          throw Error(ErrorCode::TruncatedStream, "stream " + std::to_string(step.stream_index) + " holds " +
                                                      std::to_string(bytes.size()) + " bytes, expected " +
                                                      std::to_string(want));
        }
        out.bytes = bytes;
        out.elem_bytes = step.out_elem_bytes;
        out.count = step.out_count;
        return;
      }
      case StepKind::FullyParallel: {
        const auto ops = operands(step);
        const FullyParallelKernel k{step.out_count, step.out_elem_bytes, step.fp(ops)};
        out.elem_bytes = step.out_elem_bytes;
        out.count = step.out_count;
        run_fully_parallel_into(k, cfg_.fully_parallel(step.out_elem_bytes), dev_,
                                out.allocate(step.out_count * step.out_elem_bytes));
        return;
      }
      case StepKind::Scan: {
        const auto ops = operands(step);
        const auto& src = ops[0];
        const auto n = src.count();
        out.elem_bytes = 8;
        out.count = step.scan_mode == ScanMode::Exclusive ? n + 1 : n;
        auto buf = out.allocate(out.count * 8);
        const auto& read = src.reader();
        std::span<std::int64_t> dst(reinterpret_cast<std::int64_t*>(buf.data()), out.count);
        try {
          scan_into([&read](std::uint64_t i) { return static_cast<std::int64_t>(read(i)); }, n, step.scan_mode,
                    step.scan_init, dst, dev_.worker_count);
        } catch (const Error& e) {
          if (!step.scan_expected_total || e.code() != ErrorCode::ArithmeticOverflow) throw;
          throw Error(ErrorCode::CountOverflow, "group counts overflow the output index", e.where());
        }
        if (step.scan_expected_total) {
          for (std::uint64_t g = 0; g < n; ++g) {
            if (dst[g + 1] < dst[g]) throw Error(ErrorCode::CountOverflow, "negative group count", g);
          }
          if (static_cast<std::uint64_t>(dst[n]) != *step.scan_expected_total) {
            throw Error(ErrorCode::CountOverflow, "group counts sum to " + std::to_string(dst[n]) + ", expected " +
                                                      std::to_string(*step.scan_expected_total));
          }
        }
        return;
      }
      case StepKind::GroupParallel: {
        const auto ops = operands(step);
        const auto& off_slot = slots_[step.inputs[0]];
        std::span<const std::uint64_t> offsets(reinterpret_cast<const std::uint64_t*>(off_slot.bytes.data()),
                                               off_slot.count);
        check_group_offsets(offsets);
        const GroupParallelKernel k{offsets, step.out_elem_bytes, step.gp(ops)};
        out.elem_bytes = step.out_elem_bytes;
        out.count = k.n_out();
        run_group_parallel_into(k, cfg_.group_parallel(dev_), dev_, out.allocate(out.count * out.elem_bytes));
        return;
      }
      case StepKind::NonParallel: {
        const auto ops = operands(step);
        const auto k = step.np(ops);
        const auto n_bytes = k.n_out() * k.out_elem_bytes;
        if (n_bytes != step.out_count * step.out_elem_bytes) {
          throw Error(ErrorCode::DecodeError, "chunk table covers " + std::to_string(n_bytes) + " bytes, expected " +
                                                  std::to_string(step.out_count * step.out_elem_bytes));
        }
        out.elem_bytes = step.out_elem_bytes;
        out.count = step.out_count;
        run_non_parallel_into(k, cfg_.non_parallel(dev_, k.n_chunks()), dev_, out.allocate(n_bytes));
        return;
      }
      case StepKind::Assemble: break;
    }
  }

  TypedColumn assemble(const PlanStep& step) {
    const auto n = step.out_count;
    if (step.inputs.size() == 1) {
      // A Raw string stream: count+1 offsets, then the payload.
      const auto load = std::find_if(plan_.steps.begin(), plan_.steps.end(),
                                     [&](const PlanStep& s) { return s.output == step.inputs[0]; });
      const auto& bytes = a_.streams.at(load->stream_index).bytes;
      if (bytes.size() < (n + 1) * 8) throw Error(ErrorCode::TruncatedStream, "string stream shorter than its offsets");
      auto offsets = read_u64s(bytes, n + 1);
      Bytes payload(bytes.begin() + static_cast<std::ptrdiff_t>((n + 1) * 8), bytes.end());
      return strings_from(std::move(offsets), std::move(payload), n);
    }
    const auto& offs = slots_[step.inputs[0]];
    const auto& payload = slots_[step.inputs[1]];
    return strings_from(read_u64s(offs.bytes, offs.count), Bytes(payload.bytes.begin(), payload.bytes.end()), n);
  }

  const DecodePlan& plan_;
  const CompressedArtifact& a_;
  const VirtualDevice& dev_;
  const ExecutionConfig& cfg_;
  std::vector<Slot> slots_;
  std::vector<std::size_t> last_use_;
};

}  // namespace

std::size_t DecodePlan::kernel_count() const {
  return static_cast<std::size_t>(
      std::count_if(steps.begin(), steps.end(), [](const PlanStep& s) { return is_compute(s.kind); }));
}

std::size_t DecodePlan::materialized_intermediates() const {
  std::size_t n = 0;
  for (const auto& s : steps) {
    if (!is_compute(s.kind) || s.output == result) continue;
    const auto uses = uses_of(*this, s.output);
    if (std::any_of(uses.begin(), uses.end(), [&](const Use& u) { return is_compute(steps[u.step].kind); })) ++n;
  }
  return n;
}

DecodePlan compile_decode(const CompressedArtifact& artifact) {
  validate_artifact(artifact);
  return PlanBuilder(artifact).build();
}

DecodePlan fuse(DecodePlan plan) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t p = 0; p < plan.steps.size(); ++p) {
      const auto uses = uses_of(plan, plan.steps[p].output);
      if (!can_absorb(plan, plan.steps[p], uses)) continue;
      // A producer with several consumers is recomputed inside each of them.
      const PlanStep producer = plan.steps[p];
      for (auto it = uses.rbegin(); it != uses.rend(); ++it) absorb(producer, plan.steps[it->step], it->pos);
      plan.steps.erase(plan.steps.begin() + static_cast<std::ptrdiff_t>(p));
      changed = true;
      break;
    }
  }
  return plan;
}

TypedColumn execute_plan(const DecodePlan& plan, const CompressedArtifact& artifact, const VirtualDevice& dev,
                         const ExecutionConfig& cfg) {
  dev.validate();
  return Executor(plan, artifact, dev, cfg).run();
}

TypedColumn decode_artifact(const CompressedArtifact& artifact, const VirtualDevice& dev,
                            const ExecutionConfig& cfg, bool fused) {
  auto plan = compile_decode(artifact);
  if (fused) plan = fuse(std::move(plan));
  auto col = execute_plan(plan, artifact, dev, cfg);
  const auto sum = column_checksum(col);
  if (sum != artifact.checksum) {
    throw Error(ErrorCode::ChecksumMismatch, "decoded column hashes to " + std::to_string(sum) + ", header says " +
                                                 std::to_string(artifact.checksum));
  }
  return col;
}

std::string describe_plan(const DecodePlan& plan) {
  std::ostringstream os;
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const auto& s = plan.steps[i];
    os << '#' << i << ' ' << to_string(s.kind) << ' ' << s.label;
    if (s.kind == StepKind::Load) os << " stream " << s.stream_index;
    if (!s.inputs.empty()) {
      os << " <-";
      for (auto in : s.inputs) os << " %" << in;
    }
    os << " -> %" << s.output;
    if (!s.absorbed.empty()) {
      os << " [fused:";
      for (const auto& a : s.absorbed) os << ' ' << a;
      os << ']';
    }
    os << '\n';
  }
  return os.str();
}

double plan_traffic(const DecodePlan& plan, double compressed_size, double plain_size) {
  double total = compressed_size + plain_size;
  for (const auto& s : plan.steps) {
    if (!is_compute(s.kind) || s.output == plan.result) continue;
    const auto uses = uses_of(plan, s.output);
    bool read_by_kernel = false;
    bool plain = false;
    for (const auto& u : uses) {
      const auto& c = plan.steps[u.step];
      if (!is_compute(c.kind)) continue;
      read_by_kernel = true;
      plain = plain || c.non_compressing;
    }
    if (!read_by_kernel) continue;
    const double size = plain ? plain_size : static_cast<double>(s.out_count * s.out_elem_bytes);
    total += 2 * size;
  }
  return total;
}

TrafficEstimate traffic_model(const DecodePlan& plan, double compressed_size, double plain_size) {
  TrafficEstimate t;
  t.unfused_bytes = plan_traffic(plan, compressed_size, plain_size);
  t.fused_bytes = plan_traffic(fuse(plan), compressed_size, plain_size);
  t.ratio = t.unfused_bytes / t.fused_bytes;
  return t;
}

}  // namespace patternpress
