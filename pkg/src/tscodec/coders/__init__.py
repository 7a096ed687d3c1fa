"""In-repo coders: universal codes, block packing, dynamic and static
Huffman, an order-0 range coder, and an LZSS dictionary coder.

Every coder is stateless: encode/decode are pure functions over buffers,
safe to call concurrently on distinct inputs. Payload layouts are bit-exact
across platforms (little-endian multi-byte headers, bits filled
most-significant-first within bytes); they are part of the container format
contract.
"""

from .registry import CODERS, INTERNAL_CODER_NAMES, CoderInfo, get_coder

__all__ = ["CODERS", "INTERNAL_CODER_NAMES", "CoderInfo", "get_coder"]
