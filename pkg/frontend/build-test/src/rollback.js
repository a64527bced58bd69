// Rollback session state machine, the client half of the netcode. Local
// input applies immediately, remote inputs are predicted by repeating
// their last confirmed action, and a contradicted prediction asks the
// driver to reload the last good state and re-simulate. Mirrors the
// server-side reference implementation command for command.
export class DesyncError extends Error {
    frame;
    local;
    remote;
    constructor(frame, local, remote) {
        super(`desync at confirmed frame ${frame}`);
        this.frame = frame;
        this.local = local;
        this.remote = remote;
    }
}
export class RollbackSession {
    numPlayers;
    localPlayerId;
    noopAction;
    maxPrediction;
    currentFrame = 0;
    confirmedFrame = -1;
    rollbackCount = 0;
    stallCount = 0;
    log;
    confirmedThroughBy;
    highestConfirmed;
    pendingRollback = null;
    localChecksums = new Map();
    remoteChecksums = new Map();
    constructor(numPlayers, localPlayerId, noopAction, maxPrediction = 8) {
        this.numPlayers = numPlayers;
        this.localPlayerId = localPlayerId;
        this.noopAction = noopAction;
        this.maxPrediction = maxPrediction;
        this.log = Array.from({ length: numPlayers }, () => new Map());
        this.confirmedThroughBy = new Array(numPlayers).fill(-1);
        this.highestConfirmed = new Array(numPlayers).fill(null);
    }
    entry(playerId, frame) {
        return this.log[playerId].get(frame);
    }
    confirmedThrough(playerId) {
        return this.confirmedThroughBy[playerId];
    }
    get speculationDepth() {
        return this.currentFrame - this.confirmedFrame;
    }
    get windowFull() {
        return this.currentFrame - this.confirmedFrame >= this.maxPrediction;
    }
    addLocalInput(frame, action) {
        if (frame !== this.currentFrame) {
            throw new Error(`expected frame ${this.currentFrame}, got ${frame}`);
        }
        if (this.log[this.localPlayerId].has(frame)) {
            throw new Error(`local input for frame ${frame} already recorded`);
        }
        if (this.windowFull)
            throw new Error("window full");
        this.storeConfirmed(this.localPlayerId, frame, action);
    }
    onRemoteInput(bundle) {
        const player = bundle.playerId;
        if (player < 0 || player >= this.numPlayers
            || player === this.localPlayerId || bundle.actions.length === 0) {
            throw new Error("malformed bundle");
        }
        let rollbackTo = null;
        bundle.actions.forEach((action, offset) => {
            const frame = bundle.firstFrame + offset;
            const existing = this.log[player].get(frame);
            if (existing === undefined) {
                this.storeConfirmed(player, frame, action);
            }
            else if (existing.confirmed) {
                if (existing.action !== action) {
                    throw new Error(`contradictory confirmation for frame ${frame}`);
                }
            }
            else {
                const mispredicted = existing.action !== action;
                this.storeConfirmed(player, frame, action);
                if (mispredicted && frame < this.currentFrame) {
                    if (rollbackTo === null || frame < rollbackTo)
                        rollbackTo = frame;
                }
            }
        });
        if (rollbackTo !== null) {
            this.pendingRollback = this.pendingRollback === null
                ? rollbackTo : Math.min(this.pendingRollback, rollbackTo);
        }
        return rollbackTo;
    }
    storeConfirmed(player, frame, action) {
        this.log[player].set(frame, { action, confirmed: true });
        const high = this.highestConfirmed[player];
        if (high === null || frame > high[0]) {
            this.highestConfirmed[player] = [frame, action];
        }
        let through = this.confirmedThroughBy[player];
        for (;;) {
            const next = this.log[player].get(through + 1);
            if (next === undefined || !next.confirmed)
                break;
            through += 1;
        }
        this.confirmedThroughBy[player] = through;
        this.confirmedFrame = Math.min(...this.confirmedThroughBy);
    }
    predictInput(playerId, frame) {
        const high = this.highestConfirmed[playerId];
        if (high === null)
            return this.noopAction;
        if (high[0] < frame)
            return high[1];
        let bestFrame = -1;
        let bestAction = this.noopAction;
        for (const [f, entry] of this.log[playerId]) {
            if (entry.confirmed && f < frame && f > bestFrame) {
                bestFrame = f;
                bestAction = entry.action;
            }
        }
        return bestAction;
    }
    inputsFor(frame) {
        const actions = new Map();
        for (let player = 0; player < this.numPlayers; player++) {
            const entry = this.log[player].get(frame);
            if (entry !== undefined && entry.confirmed) {
                actions.set(player, entry.action);
            }
            else {
                const predicted = this.predictInput(player, frame);
                this.log[player].set(frame, { action: predicted, confirmed: false });
                actions.set(player, predicted);
            }
        }
        return actions;
    }
    resimulatePending() {
        if (this.pendingRollback === null)
            return [];
        const rollbackTo = this.pendingRollback;
        this.pendingRollback = null;
        this.rollbackCount += 1;
        const cmds = [{ kind: "load", frame: rollbackTo }];
        for (let frame = rollbackTo; frame < this.currentFrame; frame++) {
            cmds.push({ kind: "save", frame });
            cmds.push({ kind: "advance", frame, actions: this.inputsFor(frame) });
        }
        return cmds;
    }
    advance() {
        const cmds = this.resimulatePending();
        const local = this.log[this.localPlayerId].get(this.currentFrame);
        if (local === undefined) {
            if (this.windowFull) {
                this.stallCount += 1;
                cmds.push({ kind: "stall" });
                return cmds;
            }
            throw new Error(`no local input for frame ${this.currentFrame}`);
        }
        cmds.push({ kind: "save", frame: this.currentFrame });
        cmds.push({ kind: "advance", frame: this.currentFrame,
            actions: this.inputsFor(this.currentFrame) });
        this.currentFrame += 1;
        return cmds;
    }
    recordLocalChecksum(frame, checksum) {
        if (frame > this.confirmedFrame) {
            throw new Error(`frame ${frame} not confirmed yet`);
        }
        this.localChecksums.set(frame, checksum);
        const remote = this.remoteChecksums.get(frame);
        if (remote !== undefined && remote !== checksum) {
            throw new DesyncError(frame, checksum, remote);
        }
    }
    onRemoteChecksum(frame, checksum) {
        const local = this.localChecksums.get(frame);
        if (local !== undefined && local !== checksum) {
            throw new DesyncError(frame, local, checksum);
        }
        this.remoteChecksums.set(frame, checksum);
    }
}
