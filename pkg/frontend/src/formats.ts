// Browser-side parsers for the binary wire formats served by the backend.

export interface GrayRaster {
  width: number;
  height: number;
  data: Uint8Array; // row-major intensity
}

export interface RgbRaster {
  width: number;
  height: number;
  data: Uint8Array; // row-major r,g,b triples
}

export interface OrientationField {
  width: number;
  height: number;
  theta: Float32Array; // radians in [0, pi)
  coherence: Float32Array; // [0, 1]
}

const WS = new Set([0x20, 0x09, 0x0a, 0x0d, 0x0b, 0x0c]);

function parsePnmHeader(bytes: Uint8Array, magic: string): { width: number; height: number; offset: number } {
  if (bytes.length < 2 || String.fromCharCode(bytes[0], bytes[1]) !== magic) {
    throw new Error(`bad magic, expected ${magic}`);
  }
  let pos = 2;
  const fields: number[] = [];
  while (fields.length < 3) {
    while (pos < bytes.length && (WS.has(bytes[pos]) || bytes[pos] === 0x23)) {
      if (bytes[pos] === 0x23) {
        // comment runs to end of line
        while (pos < bytes.length && bytes[pos] !== 0x0a) pos++;
      } else {
        pos++;
      }
    }
    let start = pos;
    while (pos < bytes.length && !WS.has(bytes[pos])) pos++;
    if (start === pos) throw new Error("truncated header");
    const tok = parseInt(new TextDecoder().decode(bytes.subarray(start, pos)), 10);
    if (!Number.isFinite(tok)) throw new Error("non-integer header token");
    fields.push(tok);
  }
  const [width, height, maxval] = fields;
  if (width < 1 || height < 1) throw new Error("non-positive dimensions");
  if (maxval !== 255) throw new Error(`unsupported maxval ${maxval}`);
  return { width, height, offset: pos + 1 }; // single whitespace after maxval
}

export function parsePgm(buf: ArrayBuffer): GrayRaster {
  const bytes = new Uint8Array(buf);
  const { width, height, offset } = parsePnmHeader(bytes, "P5");
  const need = width * height;
  if (bytes.length < offset + need) throw new Error("truncated P5 payload");
  return { width, height, data: bytes.slice(offset, offset + need) };
}

export function parsePpm(buf: ArrayBuffer): RgbRaster {
  const bytes = new Uint8Array(buf);
  const { width, height, offset } = parsePnmHeader(bytes, "P6");
  const need = width * height * 3;
  if (bytes.length < offset + need) throw new Error("truncated P6 payload");
  return { width, height, data: bytes.slice(offset, offset + need) };
}

export function parseOrf(buf: ArrayBuffer): OrientationField {
  const bytes = new Uint8Array(buf);
  if (bytes.length < 12 || new TextDecoder().decode(bytes.subarray(0, 4)) !== "ORF1") {
    throw new Error("bad ORF1 magic");
  }
  const view = new DataView(buf);
  const width = view.getUint32(4, true);
  const height = view.getUint32(8, true);
  const n = width * height;
  if (bytes.length < 12 + 8 * n) throw new Error("truncated ORF1 payload");
  // byte offsets may not be 4-aligned after slicing; copy into aligned arrays
  const theta = new Float32Array(n);
  const coherence = new Float32Array(n);
  for (let i = 0; i < n; i++) {
    theta[i] = view.getFloat32(12 + 4 * i, true);
    coherence[i] = view.getFloat32(12 + 4 * n + 4 * i, true);
  }
  return { width, height, theta, coherence };
}

export function grayToRgba(img: GrayRaster): Uint8ClampedArray<ArrayBuffer> {
  const out = new Uint8ClampedArray(img.width * img.height * 4);
  for (let i = 0; i < img.width * img.height; i++) {
    const v = img.data[i];
    out[4 * i] = v;
    out[4 * i + 1] = v;
    out[4 * i + 2] = v;
    out[4 * i + 3] = 255;
  }
  return out;
}

export function rgbToRgba(img: RgbRaster): Uint8ClampedArray<ArrayBuffer> {
  const out = new Uint8ClampedArray(img.width * img.height * 4);
  for (let i = 0; i < img.width * img.height; i++) {
    out[4 * i] = img.data[3 * i];
    out[4 * i + 1] = img.data[3 * i + 1];
    out[4 * i + 2] = img.data[3 * i + 2];
    out[4 * i + 3] = 255;
  }
  return out;
}
