// Counter-based PRNG matching the engine's reference implementation
// bit for bit (see docs/state-format.md). State is two u64 words; draw k
// is a pure function of (seed, k).
const MASK64 = (1n << 64n) - 1n;
const GAMMA = 0x9e3779b97f4a7c15n;
const MIX_A = 0xbf58476d1ce4e5b9n;
const MIX_B = 0x94d049bb133111ebn;
export function mix64(z) {
    z &= MASK64;
    z = ((z ^ (z >> 30n)) * MIX_A) & MASK64;
    z = ((z ^ (z >> 27n)) * MIX_B) & MASK64;
    return z ^ (z >> 31n);
}
export class CounterRng {
    seed;
    counter;
    constructor(seed, counter = 0n) {
        this.seed = BigInt(seed) & MASK64;
        this.counter = BigInt(counter) & MASK64;
    }
    nextU64() {
        this.counter = (this.counter + 1n) & MASK64;
        return mix64((this.seed + this.counter * GAMMA) & MASK64);
    }
    randrange(n) {
        if (n <= 0)
            throw new Error("randrange() needs n >= 1");
        return Number(this.nextU64() % BigInt(n));
    }
    spawn(stream) {
        return new CounterRng(mix64(this.seed ^ mix64(BigInt(stream))), 0n);
    }
    clone() {
        return new CounterRng(this.seed, this.counter);
    }
}
// Per-episode reset seed derived from a session seed; must match the
// server's derivation exactly or every checksum comparison fails.
export function episodeSeed(base, episode) {
    return mix64(BigInt(base) ^ mix64(1000003n + BigInt(episode)));
}
