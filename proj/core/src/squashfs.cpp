// SPDX-License-Identifier: Apache-2.0
#include "firmscan/squashfs.hpp"

#include <map>
#include <set>
#include <utility>

#include "firmscan/compress.hpp"
#include "firmscan/errors.hpp"
#include "firmscan/hash.hpp"

namespace firmscan {

namespace {

constexpr std::uint32_t kMagic = 0x73717368;  // "hsqs" little-endian
constexpr std::size_t kSuperblockSize = 96;
constexpr std::size_t kMetadataSize = 8192;
constexpr std::uint32_t kNoFragment = 0xffffffff;
constexpr std::uint32_t kBlockUncompressed = 1u << 24;
constexpr std::uint16_t kMetaUncompressed = 0x8000;

enum InodeType : std::uint16_t {
  kDir = 1,
  kFile = 2,
  kSymlink = 3,
  kBlockDev = 4,
  kCharDev = 5,
  kFifo = 6,
  kSocket = 7,
  kExtDir = 8,
  kExtFile = 9,
  kExtSymlink = 10,
};

struct Superblock {
  std::uint32_t inode_count;
  std::uint32_t block_size;
  std::uint32_t frag_count;
  std::uint16_t compressor;
  std::uint16_t block_log;
  std::uint16_t flags;
  std::uint64_t root_inode_ref;
  std::uint64_t bytes_used;
  std::uint64_t inode_table_start;
  std::uint64_t dir_table_start;
  std::uint64_t frag_table_start;
};

const char* compressor_name(std::uint16_t id) {
  switch (id) {
    case 1:
      return "gzip";
    case 2:
      return "lzma";
    case 3:
      return "lzo";
    case 4:
      return "xz";
    case 5:
      return "lz4";
    case 6:
      return "zstd";
    default:
      return "unknown";
  }
}

class Reader {
 public:
  Reader(ByteView blob, const SquashfsOptions& opts)
      : blob_(blob), opts_(opts), content_budget_(opts.max_total_content) {
    parse_superblock();
  }

  ExtractedFs extract() {
    ExtractedFs out;
    std::vector<FsEntry> entries;
    walk_dir(sb_.root_inode_ref, "", 0, entries, out.contents);
    out.tree = FilesystemTree::build("", std::move(entries));
    return out;
  }

 private:
  // ---- raw image access ----

  ByteView need(std::uint64_t off, std::uint64_t len, const char* what) const {
    if (off > blob_.size() || len > blob_.size() - off) {
      throw TruncatedImage(std::string("squashfs: ") + what + " at offset " + std::to_string(off) +
                           " (+" + std::to_string(len) + ") extends past blob of " +
                           std::to_string(blob_.size()) + " bytes");
    }
    return blob_.subspan(off, len);
  }

  void parse_superblock() {
    if (blob_.size() < kSuperblockSize) {
      throw CorruptSuperblock("squashfs: blob smaller than a superblock (" +
                              std::to_string(blob_.size()) + " bytes)");
    }
    if (read_le32(blob_, 0) != kMagic) {
      throw CorruptSuperblock("squashfs: bad magic");
    }
    std::uint16_t major = read_le16(blob_, 28);
    std::uint16_t minor = read_le16(blob_, 30);
    if (major != 4 || minor != 0) {
      throw CorruptSuperblock("squashfs: unsupported version " + std::to_string(major) + "." +
                              std::to_string(minor) + " (only 4.0 is readable)");
    }
    sb_.inode_count = read_le32(blob_, 4);
    sb_.block_size = read_le32(blob_, 12);
    sb_.frag_count = read_le32(blob_, 16);
    sb_.compressor = read_le16(blob_, 20);
    sb_.block_log = read_le16(blob_, 22);
    sb_.flags = read_le16(blob_, 24);
    sb_.root_inode_ref = read_le64(blob_, 32);
    sb_.bytes_used = read_le64(blob_, 40);
    sb_.inode_table_start = read_le64(blob_, 64);
    sb_.dir_table_start = read_le64(blob_, 72);
    sb_.frag_table_start = read_le64(blob_, 80);

    if (sb_.block_size < 4096 || sb_.block_size > (1u << 20) ||
        (sb_.block_size & (sb_.block_size - 1)) != 0 ||
        (1u << sb_.block_log) != sb_.block_size) {
      throw CorruptSuperblock("squashfs: implausible block size " +
                              std::to_string(sb_.block_size));
    }
    if (sb_.compressor != 1) {
      throw UnsupportedCompressor(std::string("squashfs: compressor ") +
                                  compressor_name(sb_.compressor) + " (id " +
                                  std::to_string(sb_.compressor) +
                                  ") is not supported natively; only gzip images are unpacked");
    }
    if (sb_.bytes_used > blob_.size()) {
      throw TruncatedImage("squashfs: superblock claims " + std::to_string(sb_.bytes_used) +
                           " bytes used but blob holds " + std::to_string(blob_.size()));
    }
  }

  // ---- metadata blocks ----

  struct MetaBlock {
    Bytes data;
    std::uint64_t next;  // absolute offset of the following block
  };

  const MetaBlock& meta_block(std::uint64_t abs) {
    auto it = meta_cache_.find(abs);
    if (it != meta_cache_.end()) return it->second;
    ByteView hdr = need(abs, 2, "metadata block header");
    std::uint16_t word = read_le16(hdr, 0);
    std::size_t stored = word & 0x7fff;
    if (stored == 0 || stored > kMetadataSize) {
      throw TruncatedImage("squashfs: metadata block with invalid stored size " +
                           std::to_string(stored));
    }
    ByteView body = need(abs + 2, stored, "metadata block body");
    MetaBlock blk;
    if (word & kMetaUncompressed) {
      blk.data.assign(body.begin(), body.end());
    } else {
      blk.data = zlib_inflate(body, kMetadataSize);
    }
    if (blk.data.size() > kMetadataSize) {
      throw TruncatedImage("squashfs: metadata block inflates beyond 8 KiB");
    }
    blk.next = abs + 2 + stored;
    return meta_cache_.emplace(abs, std::move(blk)).first->second;
  }

  /// Sequential reader over a metadata stream, starting at byte `offset`
  /// of the block at `table_start + block_rel`.
  class MetaCursor {
   public:
    MetaCursor(Reader& r, std::uint64_t table_start, std::uint64_t block_rel, std::uint16_t offset)
        : r_(r), abs_(table_start + block_rel), pos_(offset) {
      const MetaBlock& blk = r_.meta_block(abs_);
      if (pos_ > blk.data.size()) {
        throw TruncatedImage("squashfs: metadata reference offset past block end");
      }
    }

    std::uint16_t u16() { return static_cast<std::uint16_t>(byte() | (byte() << 8)); }
    std::uint32_t u32() {
      std::uint32_t v = u16();
      return v | (static_cast<std::uint32_t>(u16()) << 16);
    }
    std::uint64_t u64() {
      std::uint64_t v = u32();
      return v | (static_cast<std::uint64_t>(u32()) << 32);
    }
    std::int16_t s16() { return static_cast<std::int16_t>(u16()); }

    Bytes take(std::size_t n) {
      Bytes out;
      out.reserve(n);
      for (std::size_t i = 0; i < n; ++i) out.push_back(byte());
      return out;
    }

   private:
    std::uint8_t byte() {
      const MetaBlock* blk = &r_.meta_block(abs_);
      while (pos_ >= blk->data.size()) {
        abs_ = blk->next;
        pos_ = 0;
        blk = &r_.meta_block(abs_);
      }
      return blk->data[pos_++];
    }

    Reader& r_;
    std::uint64_t abs_;
    std::size_t pos_;
  };

  MetaCursor inode_cursor(std::uint64_t ref) {
    return MetaCursor(*this, sb_.inode_table_start, ref >> 16,
                      static_cast<std::uint16_t>(ref & 0xffff));
  }

  // ---- data blocks and fragments ----

  Bytes data_block(std::uint64_t off, std::uint32_t size_word, std::uint32_t logical_limit) {
    std::uint32_t stored = size_word & ~kBlockUncompressed;
    if (stored == 0) {
      return Bytes(logical_limit, 0);  // sparse block
    }
    ByteView body = need(off, stored, "data block");
    Bytes out;
    if (size_word & kBlockUncompressed) {
      out.assign(body.begin(), body.end());
    } else {
      out = zlib_inflate(body, sb_.block_size);
    }
    if (out.size() > logical_limit) {
      throw TruncatedImage("squashfs: data block inflates past its logical size");
    }
    return out;
  }

  struct Fragment {
    std::uint64_t start;
    std::uint32_t size_word;
  };

  Fragment fragment(std::uint32_t idx) {
    if (idx >= sb_.frag_count) {
      throw TruncatedImage("squashfs: fragment index " + std::to_string(idx) + " out of range");
    }
    std::uint64_t ptr_off = sb_.frag_table_start + 8ull * (idx / 512);
    std::uint64_t block_abs = read_le64(need(ptr_off, 8, "fragment table pointer"), 0);
    const MetaBlock& blk = meta_block(block_abs);
    std::size_t entry_off = (idx % 512) * 16;
    if (entry_off + 16 > blk.data.size()) {
      throw TruncatedImage("squashfs: fragment entry past metadata block end");
    }
    return {read_le64(blk.data, entry_off), read_le32(blk.data, entry_off + 8)};
  }

  Bytes read_file_content(MetaCursor& cur, bool extended) {
    std::uint64_t blocks_start;
    std::uint64_t file_size;
    std::uint32_t frag_idx;
    std::uint32_t frag_offset;
    if (extended) {
      blocks_start = cur.u64();
      file_size = cur.u64();
      cur.u64();  // sparse byte count
      cur.u32();  // nlink
      frag_idx = cur.u32();
      frag_offset = cur.u32();
      cur.u32();  // xattr
    } else {
      blocks_start = cur.u32();
      frag_idx = cur.u32();
      frag_offset = cur.u32();
      file_size = cur.u32();
    }

    bool has_fragment = frag_idx != kNoFragment;
    std::uint64_t nblocks =
        has_fragment ? file_size / sb_.block_size : (file_size + sb_.block_size - 1) / sb_.block_size;

    if (content_budget_ < file_size) {
      throw ResourceLimitExceeded("squashfs: total decompressed content exceeds limit of " +
                                  std::to_string(opts_.max_total_content) + " bytes");
    }
    content_budget_ -= file_size;

    Bytes content;
    content.reserve(file_size);
    std::uint64_t off = blocks_start;
    std::uint64_t remaining = file_size;
    for (std::uint64_t i = 0; i < nblocks; ++i) {
      std::uint32_t word = cur.u32();
      auto logical = static_cast<std::uint32_t>(std::min<std::uint64_t>(remaining, sb_.block_size));
      Bytes blk = data_block(off, word, sb_.block_size);
      if ((word & ~kBlockUncompressed) == 0) blk.resize(logical);  // sparse
      if (blk.size() != logical) {
        throw TruncatedImage("squashfs: data block decodes to " + std::to_string(blk.size()) +
                             " bytes, expected " + std::to_string(logical));
      }
      content.insert(content.end(), blk.begin(), blk.end());
      off += word & ~kBlockUncompressed;
      remaining -= logical;
    }
    if (has_fragment && remaining > 0) {
      Fragment frag = fragment(frag_idx);
      Bytes frag_block = data_block(frag.start, frag.size_word, sb_.block_size);
      if (static_cast<std::uint64_t>(frag_offset) + remaining > frag_block.size()) {
        throw TruncatedImage("squashfs: file tail extends past its fragment block");
      }
      content.insert(content.end(), frag_block.begin() + frag_offset,
                     frag_block.begin() + frag_offset + remaining);
    } else if (remaining > 0) {
      throw TruncatedImage("squashfs: file content shorter than inode size");
    }
    return content;
  }

  // ---- directory walk ----

  struct DirInfo {
    std::uint32_t start_block;
    std::uint32_t listing_size;  // includes the 3 virtual bytes
    std::uint16_t block_offset;
  };

  void walk_dir(std::uint64_t dir_ref, const std::string& prefix, int depth,
                std::vector<FsEntry>& entries, ContentStore& contents) {
    if (depth > 256) {
      throw CorruptSuperblock("squashfs: directory nesting deeper than 256 levels");
    }
    if (!visited_dirs_.insert(dir_ref).second) {
      throw CorruptSuperblock("squashfs: directory structure loops");
    }

    MetaCursor cur = inode_cursor(dir_ref);
    std::uint16_t type = cur.u16();
    std::uint16_t mode = cur.u16();
    cur.u16();  // uid
    cur.u16();  // gid
    cur.u32();  // mtime
    cur.u32();  // inode number

    DirInfo info{};
    if (type == kDir) {
      info.start_block = cur.u32();
      cur.u32();  // nlink
      info.listing_size = cur.u16();
      info.block_offset = cur.u16();
      cur.u32();  // parent
    } else if (type == kExtDir) {
      cur.u32();  // nlink
      info.listing_size = cur.u32();
      info.start_block = cur.u32();
      cur.u32();  // parent
      cur.u16();  // index count
      info.block_offset = cur.u16();
      cur.u32();  // xattr
    } else {
      throw CorruptSuperblock("squashfs: expected a directory inode, found type " +
                              std::to_string(type));
    }

    if (!prefix.empty()) {
      entries.push_back({prefix, FsEntryKind::Dir, 0,
                         static_cast<std::uint16_t>(mode & 07777), {}, {}});
    }
    if (info.listing_size <= 3) return;  // empty directory

    MetaCursor dir(*this, sb_.dir_table_start, info.start_block, info.block_offset);
    std::uint64_t remaining = info.listing_size - 3;
    while (remaining > 0) {
      if (remaining < 12) {
        throw TruncatedImage("squashfs: directory header extends past listing");
      }
      std::uint32_t count = dir.u32();
      std::uint32_t start = dir.u32();
      dir.u32();  // base inode number
      remaining -= 12;
      if (count >= 256) {
        throw CorruptSuperblock("squashfs: directory run longer than 256 entries");
      }
      for (std::uint32_t i = 0; i <= count; ++i) {
        if (remaining < 8) {
          throw TruncatedImage("squashfs: directory entry extends past listing");
        }
        std::uint16_t offset = dir.u16();
        dir.s16();  // inode number delta
        std::uint16_t entry_type = dir.u16();
        std::uint16_t name_size = dir.u16();
        remaining -= 8;
        if (remaining < static_cast<std::uint64_t>(name_size) + 1) {
          throw TruncatedImage("squashfs: directory name extends past listing");
        }
        Bytes name_bytes = dir.take(name_size + 1u);
        remaining -= name_size + 1u;
        std::string name = string_of(name_bytes);
        if (name.empty() || name == "." || name == ".." ||
            name.find('/') != std::string::npos || name.find('\0') != std::string::npos) {
          throw CorruptSuperblock("squashfs: illegal directory entry name");
        }
        std::string path = prefix.empty() ? name : prefix + "/" + name;
        std::uint64_t child_ref = (static_cast<std::uint64_t>(start) << 16) | offset;
        visit_entry(entry_type, child_ref, path, depth, entries, contents);
      }
    }
  }

  void visit_entry(std::uint16_t entry_type, std::uint64_t ref, const std::string& path, int depth,
                   std::vector<FsEntry>& entries, ContentStore& contents) {
    switch (entry_type) {
      case kDir:
        walk_dir(ref, path, depth + 1, entries, contents);
        return;
      case kFile: {
        MetaCursor cur = inode_cursor(ref);
        std::uint16_t type = cur.u16();
        std::uint16_t mode = cur.u16();
        cur.u16();
        cur.u16();
        cur.u32();
        cur.u32();
        if (type != kFile && type != kExtFile) {
          throw CorruptSuperblock("squashfs: directory entry type disagrees with inode");
        }
        Bytes content = read_file_content(cur, type == kExtFile);
        std::string digest = sha256_hex(ByteView(content));
        entries.push_back({path, FsEntryKind::File, content.size(),
                           static_cast<std::uint16_t>(mode & 07777), digest, {}});
        contents.put(digest, std::move(content));
        return;
      }
      case kSymlink: {
        MetaCursor cur = inode_cursor(ref);
        std::uint16_t type = cur.u16();
        std::uint16_t mode = cur.u16();
        cur.u16();
        cur.u16();
        cur.u32();
        cur.u32();
        if (type != kSymlink && type != kExtSymlink) {
          throw CorruptSuperblock("squashfs: directory entry type disagrees with inode");
        }
        cur.u32();  // nlink
        std::uint32_t target_size = cur.u32();
        if (target_size > 4096) {
          throw CorruptSuperblock("squashfs: symlink target longer than 4096 bytes");
        }
        std::string target = string_of(cur.take(target_size));
        entries.push_back({path, FsEntryKind::Symlink, target.size(),
                           static_cast<std::uint16_t>(mode & 07777), {}, target});
        return;
      }
      case kBlockDev:
      case kCharDev:
      case kFifo:
      case kSocket:
        return;  // not represented in the tree
      default:
        throw CorruptSuperblock("squashfs: unknown directory entry type " +
                                std::to_string(entry_type));
    }
  }

  ByteView blob_;
  SquashfsOptions opts_;
  Superblock sb_{};
  std::map<std::uint64_t, MetaBlock> meta_cache_;
  std::set<std::uint64_t> visited_dirs_;
  std::uint64_t content_budget_ = 0;
};

}  // namespace

ExtractedFs extract_squashfs(ByteView blob, const SquashfsOptions& opts) {
  return Reader(blob, opts).extract();
}

}  // namespace firmscan
