// Object kinds and the per-scope registry, mirroring the engine.
export function makeKind(partial) {
    return {
        color: "grey",
        canPickup: false,
        canToggle: false,
        canOverlap: false,
        blocksMovement: false,
        stateInit: [],
        ...partial,
    };
}
export function kindBlocks(kind, state) {
    if (!kind.blocksMovement)
        return false;
    if (kind.blocksWhen)
        return kind.blocksWhen(state);
    return true;
}
export function makeInstance(kind, state) {
    return { kind, state: state ? [...state] : [...kind.stateInit] };
}
export class Registry {
    byNameMap = new Map();
    byCharMap = new Map();
    register(kind) {
        const nameKey = `${kind.scope}/${kind.name}`;
        const charKey = `${kind.scope}/${kind.char}`;
        if (this.byNameMap.has(nameKey))
            throw new Error(`duplicate kind ${nameKey}`);
        if (this.byCharMap.has(charKey))
            throw new Error(`duplicate char ${charKey}`);
        this.byNameMap.set(nameKey, kind);
        this.byCharMap.set(charKey, kind);
        return kind;
    }
    byName(scope, name) {
        const kind = this.byNameMap.get(`${scope}/${name}`);
        if (!kind)
            throw new Error(`no kind ${scope}/${name}`);
        return kind;
    }
    byChar(scope, char) {
        const kind = this.byCharMap.get(`${scope}/${char}`);
        if (!kind)
            throw new Error(`no kind with char ${JSON.stringify(char)} in ${scope}`);
        return kind;
    }
    hasChar(scope, char) {
        return this.byCharMap.has(`${scope}/${char}`);
    }
}
export const defaultRegistry = new Registry();
